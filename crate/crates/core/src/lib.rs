//! Gradient-flow decoding of LDPC codes.
//!
//! The decoder integrates `dx/dt = -(x - y + grad h(x))`, where `h` is a
//! sum-of-squares potential that vanishes exactly on bipolar codewords, with
//! a fixed-step Euler method and takes the sign of the final state. The
//! crate also carries what is needed to evaluate it: alist I/O, a GF(2)
//! encoder, an AWGN channel, belief-propagation and bit-flipping baselines,
//! a seeded parallel BER harness, and an exporter for the equivalent analog
//! dataflow graph.

pub mod baselines;
pub mod channel;
pub mod circuit;
pub mod code;
pub mod config;
pub mod diag;
pub mod encoder;
pub mod error;
pub mod flow;
pub mod potential;
pub mod sim;

pub use baselines::{bp_decode, gdbf_decode, BpParams, GdbfParams};
pub use channel::{sigma_from_snr, transmit, trial_rng, ChannelParams};
pub use circuit::{build_circuit_graph, emit_dot, emit_netlist, simulate_circuit, CircuitGraph};
pub use code::{
    binary_to_bipolar, hard_decision, parse_alist, read_alist_file, syndrome, write_alist,
    BinaryWord, BipolarWord, ParityCheckMatrix,
};
pub use config::{parse_config, render_config, DecoderId, DecoderParams, ExperimentConfig};
pub use encoder::{build_encoder, gf2_rank, random_codeword, Encoder};
pub use error::{Error, Result};
pub use flow::{
    decode, decode_word, euler_step, Capture, DecodeResult, EulerParams, InitPolicy, Trajectory,
};
pub use potential::{
    code_energy, code_energy_gradient, total_energy, total_gradient, PotentialParams,
};
pub use sim::{run_ber_sweep, run_ber_sweep_with_code, to_csv, BerRecord};
