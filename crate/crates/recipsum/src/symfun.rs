//! Elementary symmetric functions of the reciprocal powers, and the
//! integer-hit scanner.
//!
//! `e_k` is the sum of all k-fold products of the n fractions
//! `1/(a+(i-1)b)^{s_i}`; `e_1` is the reciprocal power sum itself and `e_n`
//! the full product. The scanner samples exponent sequences and reports every
//! `e_k` whose canonical denominator is 1 — expected to find none for
//! `n >= 4`, and any hit is a finding, not an error.

use crate::exactnum::{rat_pow, Rational};
use crate::powersum::{ExponentSeq, ProgressionSpec};
use crate::seeding::derive_seed;
use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

/// The values `e_1..e_n`, all strictly positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymFunVector(Vec<Rational>);

impl SymFunVector {
    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    /// 1-based accessor for `e_k`.
    pub fn e(&self, k: usize) -> &Rational {
        &self.0[k - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based indices `k` with `e_k` an integer (canonical denominator 1).
    pub fn integer_hits(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, v)| v.denom().is_one())
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// All elementary symmetric functions, by inserting one fraction at a time:
/// `e_j += x * e_{j-1}` walked downward. O(n^2) rational operations.
pub fn sym_all(spec: &ProgressionSpec, seq: &ExponentSeq) -> SymFunVector {
    let n = seq.len();
    let mut e: Vec<Rational> = Vec::with_capacity(n + 1);
    e.push(Rational::one());
    for (i, &s) in seq.iter().enumerate() {
        let x = rat_pow(
            &Rational::new(BigInt::one(), BigInt::from(spec.term(i + 1))),
            s,
        );
        e.push(Rational::from_integer(BigInt::from(0)));
        for j in (1..e.len()).rev() {
            let add = &x * &e[j - 1];
            e[j] = &e[j] + add;
        }
    }
    SymFunVector(e.split_off(1))
}

/// Grid bounds and sampling parameters for the integer-hit scan.
/// Cells run over `1 <= a <= a_max`, `1 <= b <= b_max`, `4 <= n <= n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjectureScanConfig {
    pub a_max: u64,
    pub b_max: u64,
    pub n_max: usize,
    pub trials_per_cell: u32,
    pub exponent_max: u32,
    pub seed: u64,
}

/// One sampled cell: the drawn sequence's seed and any integer hits among
/// `e_1..e_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellReport {
    pub a: u64,
    pub b: u64,
    pub n: usize,
    pub trial: u32,
    pub cell_seed: u64,
    pub hits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureScanReport {
    /// One entry per (a, b, n, trial), in grid order.
    pub cells: Vec<CellReport>,
    pub hits_total: u64,
}

/// Deterministic scan: cell order and per-cell seeds are independent of the
/// worker count.
pub fn conjecture_scan(
    cfg: &ConjectureScanConfig,
    threads: Option<usize>,
) -> ConjectureScanReport {
    let mut ids = Vec::new();
    for a in 1..=cfg.a_max {
        for b in 1..=cfg.b_max {
            for n in 4..=cfg.n_max {
                for trial in 0..cfg.trials_per_cell {
                    ids.push((a, b, n, trial));
                }
            }
        }
    }
    let run = || {
        ids.par_iter()
            .map(|&(a, b, n, trial)| {
                let cell_seed = derive_seed(cfg.seed, &[a, b, n as u64, trial as u64]);
                let spec = ProgressionSpec::new(a, b).expect("grid bounds start at 1");
                let seq = ExponentSeq::random(cell_seed, cfg.exponent_max, n)
                    .expect("nonempty sequence with positive bound");
                let hits = sym_all(&spec, &seq).integer_hits();
                CellReport { a, b, n, trial, cell_seed, hits }
            })
            .collect::<Vec<_>>()
    };
    let cells = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    };
    let hits_total = cells.iter().map(|c| c.hits.len() as u64).sum();
    ConjectureScanReport { cells, hits_total }
}
