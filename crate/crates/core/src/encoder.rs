//! Systematic encoding through Gaussian elimination over GF(2).

use rand::Rng;

use crate::code::{binary_to_bipolar, BinaryWord, BipolarWord, ParityCheckMatrix};
use crate::error::{Error, Result};

/// Dense bit-packed rows, used only during elimination.
struct BitRows {
    words: usize,
    data: Vec<u64>,
}

impl BitRows {
    fn from_matrix(h: &ParityCheckMatrix) -> Self {
        let words = h.n().div_ceil(64);
        let mut data = vec![0u64; words * h.m()];
        for (i, row) in h.rows().iter().enumerate() {
            for &j in row {
                data[i * words + j / 64] |= 1 << (j % 64);
            }
        }
        Self { words, data }
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn swap(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.words {
                self.data.swap(a * self.words + w, b * self.words + w);
            }
        }
    }

    /// row[dst] ^= row[src]
    fn xor_into(&mut self, dst: usize, src: usize) {
        for w in 0..self.words {
            let v = self.data[src * self.words + w];
            self.data[dst * self.words + w] ^= v;
        }
    }
}

/// Reduced row echelon form; returns the pivot column of each nonzero row.
fn reduce(h: &ParityCheckMatrix) -> (BitRows, Vec<usize>) {
    let mut a = BitRows::from_matrix(h);
    let (m, n) = (h.m(), h.n());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| a.get(i, c)) else { continue };
        a.swap(r, p);
        for i in 0..m {
            if i != r && a.get(i, c) {
                a.xor_into(i, r);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank of `h` over GF(2).
pub fn gf2_rank(h: &ParityCheckMatrix) -> usize {
    reduce(h).1.len()
}

/// Maps `k` message bits to codewords of the source matrix.
///
/// Message bits are copied to the non-pivot columns of the reduced matrix;
/// each pivot column is the XOR of the message bits its row touches.
#[derive(Debug, Clone)]
pub struct Encoder {
    n: usize,
    message_positions: Vec<usize>,
    /// (codeword position, indices into the message) per parity bit.
    parity: Vec<(usize, Vec<usize>)>,
}

impl Encoder {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let (a, pivots) = reduce(h);
        let n = h.n();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let message_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let parity = pivots
            .iter()
            .enumerate()
            .map(|(r, &p)| {
                let taps = message_positions
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| a.get(r, c))
                    .map(|(idx, _)| idx)
                    .collect();
                (p, taps)
            })
            .collect();
        Self { n, message_positions, parity }
    }

    /// Message length `n - rank(H)`.
    pub fn k(&self) -> usize {
        self.message_positions.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn message_positions(&self) -> &[usize] {
        &self.message_positions
    }

    pub fn encode(&self, message: &[u8]) -> Result<BinaryWord> {
        if message.len() != self.k() {
            return Err(Error::LengthMismatch { expected: self.k(), got: message.len() });
        }
        let mut bits = vec![0u8; self.n];
        for (&pos, &b) in self.message_positions.iter().zip(message) {
            bits[pos] = b & 1;
        }
        for (pos, taps) in &self.parity {
            bits[*pos] = taps.iter().fold(0, |acc, &t| acc ^ (message[t] & 1));
        }
        Ok(BinaryWord(bits))
    }

    /// A uniformly random binary codeword.
    pub fn random_binary<R: Rng + ?Sized>(&self, rng: &mut R) -> BinaryWord {
        let msg: Vec<u8> = (0..self.k()).map(|_| rng.random::<bool>() as u8).collect();
        self.encode(&msg).expect("message length matches k")
    }
}

/// Convenience constructor.
pub fn build_encoder(h: &ParityCheckMatrix) -> Encoder {
    Encoder::new(h)
}

/// A uniformly random codeword in bipolar form.
pub fn random_codeword<R: Rng + ?Sized>(enc: &Encoder, rng: &mut R) -> BipolarWord {
    binary_to_bipolar(&enc.random_binary(rng))
}
