use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gfldpc::circuit::{build_circuit_graph, emit_dot, emit_netlist, DEFAULT_DELTA};
use gfldpc::config::{parse_init, parse_list};
use gfldpc::diag::emit_diagnostics;
use gfldpc::sim::{run_ber_sweep_with_code, to_csv, TrialSource};
use gfldpc::{
    parse_config, read_alist_file, render_config, sigma_from_snr, DecoderId, Encoder, Error,
    EulerParams, ExperimentConfig, PotentialParams,
};

#[derive(Parser)]
#[command(name = "gfldpc", version, about = "Gradient-flow LDPC decoding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo BER sweep; writes CSV.
    Ber(BerArgs),
    /// Energy, snapshot and solution-curve tables for one received word.
    Diag(DiagArgs),
    /// Export the analog dataflow graph of a code.
    Circuit(CircuitArgs),
    /// Check an alist file and/or a config file.
    Validate(ValidateArgs),
}

/// Gradient-flow parameters shared by several subcommands.
#[derive(Args, Clone)]
struct FlowArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Integration horizon T.
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Number of Euler steps N.
    #[arg(long)]
    steps: Option<usize>,
    /// zero | scaled:<delta> | explicit:<x0,...>
    #[arg(long)]
    init: Option<String>,
}

#[derive(Args)]
struct BerArgs {
    /// Config file; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    code: Option<PathBuf>,
    /// Comma-separated list of gf, bp, gdbf.
    #[arg(long)]
    decoder: Option<String>,
    /// Comma-separated SNR list in dB.
    #[arg(long)]
    snr: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long = "min-errors")]
    min_errors: Option<u64>,
    #[arg(long)]
    rate: Option<f64>,
    #[command(flatten)]
    flow: FlowArgs,
    #[arg(long = "early-stop")]
    early_stop: Option<bool>,
    #[arg(long = "bp-iters")]
    bp_iters: Option<usize>,
    #[arg(long = "gdbf-iters")]
    gdbf_iters: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Fill the seconds column with wall time (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Print the effective config instead of running.
    #[arg(long = "print-config")]
    print_config: bool,
}

#[derive(Args)]
struct DiagArgs {
    #[arg(long)]
    code: PathBuf,
    /// Explicit received word (comma separated); otherwise a random codeword is sent.
    #[arg(long, allow_hyphen_values = true)]
    received: Option<String>,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    snr: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Trial index used for the random draw.
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[command(flatten)]
    flow: FlowArgs,
    /// Snapshot times (comma separated).
    #[arg(long, default_value = "0.1,1")]
    times: String,
    #[arg(long = "out-dir", default_value = "diag")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CircuitFormat {
    Dot,
    Netlist,
}

#[derive(Args)]
struct CircuitArgs {
    #[arg(long)]
    code: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_DELTA, allow_hyphen_values = true)]
    delta: f64,
    #[arg(long, value_enum, default_value = "dot")]
    format: CircuitFormat,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    code: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

fn apply_flow(
    flow: &FlowArgs,
    potential: &mut PotentialParams,
    euler: &mut EulerParams,
) -> gfldpc::Result<()> {
    *potential = PotentialParams::new(
        flow.alpha.unwrap_or(potential.alpha()),
        flow.beta.unwrap_or(potential.beta()),
    )?;
    let mut e = EulerParams::new(
        flow.t_end.unwrap_or(euler.t_end()),
        flow.steps.unwrap_or(euler.steps()),
    )?
    .with_init(euler.init.clone())
    .with_early_stop(euler.early_stop);
    e.guard = euler.guard;
    if let Some(init) = &flow.init {
        e.init = parse_init(init)?;
    }
    *euler = e;
    Ok(())
}

fn write_out(path: Option<&PathBuf>, body: &str) -> gfldpc::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn ber(args: BerArgs) -> gfldpc::Result<()> {
    let mut cfg = match &args.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => {
            let code = args.code.clone().ok_or_else(|| {
                Error::InvalidParameter("--code is required without --config".into())
            })?;
            ExperimentConfig::new(code, vec![DecoderId::Gf], Vec::new())
        }
    };
    cfg.seed = args.seed;
    if let Some(c) = args.code {
        cfg.code = c;
    }
    if let Some(d) = &args.decoder {
        cfg.decoders = parse_list(d)?;
    }
    if let Some(s) = &args.snr {
        cfg.snr_db = parse_list(s)?;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if args.min_errors.is_some() {
        cfg.min_errors = args.min_errors;
    }
    if args.rate.is_some() {
        cfg.rate = args.rate;
    }
    if args.output.is_some() {
        cfg.output = args.output;
    }
    apply_flow(&args.flow, &mut cfg.params.potential, &mut cfg.params.euler)?;
    if let Some(es) = args.early_stop {
        cfg.params.euler.early_stop = es;
    }
    if let Some(i) = args.bp_iters {
        cfg.params.bp.max_iterations = i;
    }
    if let Some(i) = args.gdbf_iters {
        cfg.params.gdbf.max_iterations = i;
    }
    if let Some(t) = args.theta {
        cfg.params.gdbf.theta = t;
    }
    cfg.validate()?;
    if args.print_config {
        print!("{}", render_config(&cfg));
        return Ok(());
    }
    let h = read_alist_file(&cfg.code)?;
    let workers = if args.workers == 0 { rayon_threads() } else { args.workers };
    let records = run_ber_sweep_with_code(&h, &cfg, workers, args.timing)?;
    write_out(cfg.output.as_ref(), &to_csv(&records))
}

fn rayon_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn diag(args: DiagArgs) -> gfldpc::Result<()> {
    let h = read_alist_file(&args.code)?;
    let mut p = PotentialParams::unit();
    let mut e = EulerParams::ber_default();
    apply_flow(&args.flow, &mut p, &mut e)?;
    let times: Vec<f64> = parse_list(&args.times)?;
    let encoder;
    let (sent, y) = match &args.received {
        Some(list) => (None, parse_list(list)?),
        None => {
            encoder = Encoder::new(&h);
            let sigma = sigma_from_snr(args.snr, h.design_rate())?;
            let (s, y) = TrialSource::new(&encoder, args.seed).draw(args.trial, sigma);
            (Some(s), y)
        }
    };
    let d = emit_diagnostics(&h, &y, &p, &e, &times, sent.as_ref(), &args.out_dir)?;
    let errors = sent.as_ref().map(|s| s.to_binary().hamming_distance(&d.result.hard_word));
    eprintln!(
        "wrote {} samples to {}; syndrome_ok={} diverged={}{}",
        d.trajectory.len(),
        args.out_dir.display(),
        d.result.syndrome_ok,
        d.result.diverged,
        errors.map(|e| format!(" bit_errors={e}")).unwrap_or_default()
    );
    Ok(())
}

fn circuit(args: CircuitArgs) -> gfldpc::Result<()> {
    let h = read_alist_file(&args.code)?;
    let g = build_circuit_graph(&h, &PotentialParams::new(args.alpha, args.beta)?, args.delta)?;
    let body = match args.format {
        CircuitFormat::Dot => emit_dot(&g),
        CircuitFormat::Netlist => emit_netlist(&g),
    };
    write_out(args.output.as_ref(), &body)
}

fn validate(args: ValidateArgs) -> gfldpc::Result<()> {
    if args.code.is_none() && args.config.is_none() {
        return Err(Error::InvalidParameter("nothing to validate: pass --code or --config".into()));
    }
    if let Some(path) = &args.code {
        let h = read_alist_file(path)?;
        println!(
            "{}: ok, n={} m={} ones={} rank={} k={}",
            path.display(),
            h.n(),
            h.m(),
            h.num_ones(),
            gfldpc::gf2_rank(&h),
            h.n() - gfldpc::gf2_rank(&h)
        );
    }
    if let Some(path) = &args.config {
        let cfg = parse_config(&std::fs::read_to_string(path)?)?;
        let h = read_alist_file(&cfg.code)?;
        println!("{}: ok, code n={} m={}", path.display(), h.n(), h.m());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Ber(a) => ber(a),
        Command::Diag(a) => diag(a),
        Command::Circuit(a) => circuit(a),
        Command::Validate(a) => validate(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
