//! Deterministic certification grid: both finders over every
//! `(a, b, n, trial)` cell with seeded exponent sequences.
//!
//! Cell order and per-cell seeds are fixed by the configuration alone, so
//! results are byte-reproducible regardless of the worker count. Consumers
//! map each case to whatever small result they need (a JSON line, a counter)
//! — certificates carry exact `H` values and are too large to retain for big
//! grids.

use crate::certify::{
    certify_exhaustive, certify_guided, check_certificate, Certificate, CertificateKind,
    CertifyError,
};
use crate::powersum::{ExponentSeq, ProgressionSpec};
use crate::seeding::derive_seed;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridConfig {
    pub a_max: u64,
    pub b_max: u64,
    /// Smallest sequence length, at least 2.
    pub n_min: usize,
    pub n_max: usize,
    pub trials: u32,
    pub exponent_max: u32,
    pub seed: u64,
}

impl GridConfig {
    pub fn case_count(&self) -> u64 {
        if self.n_max < self.n_min.max(2) {
            return 0;
        }
        let n_span = (self.n_max - self.n_min.max(2) + 1) as u64;
        self.a_max * self.b_max * n_span * self.trials as u64
    }
}

/// Everything one grid cell produced. `guided` verified itself before
/// returning; `exhaustive_check` is the independent re-check of the oracle's
/// certificate.
#[derive(Debug)]
pub struct CaseOutcome {
    pub a: u64,
    pub b: u64,
    pub n: usize,
    pub trial: u32,
    pub case_seed: u64,
    pub seq: ExponentSeq,
    pub guided: Result<Certificate, CertifyError>,
    pub exhaustive: Result<Certificate, CertifyError>,
}

impl CaseOutcome {
    /// First failure in this case, if any: a finder error or a certificate
    /// that does not verify.
    pub fn failure(&self) -> Option<String> {
        let spec = ProgressionSpec::new(self.a, self.b).expect("grid bounds start at 1");
        for (label, result) in [("guided", &self.guided), ("exhaustive", &self.exhaustive)] {
            match result {
                Err(e) => return Some(format!("{label} finder failed: {e}")),
                Ok(cert) => {
                    if let Err(e) = check_certificate(&spec, &self.seq, cert) {
                        return Some(format!("{label} certificate rejected: {e}"));
                    }
                }
            }
        }
        None
    }
}

/// Per-case seed: mixes the grid coordinates into the root seed.
pub fn case_seed(root: u64, a: u64, b: u64, n: usize, trial: u32) -> u64 {
    derive_seed(root, &[a, b, n as u64, trial as u64])
}

/// Run the grid, mapping every case outcome to a small result, in
/// deterministic `(a, b, n, trial)` order.
pub fn run_grid<R, F>(cfg: &GridConfig, threads: Option<usize>, map: F) -> Vec<R>
where
    R: Send,
    F: Fn(CaseOutcome) -> R + Sync,
{
    let n_min = cfg.n_min.max(2);
    let mut ids: Vec<(u64, u64, usize, u32)> = Vec::new();
    if cfg.n_max >= n_min {
        for a in 1..=cfg.a_max {
            for b in 1..=cfg.b_max {
                for n in n_min..=cfg.n_max {
                    for trial in 0..cfg.trials {
                        ids.push((a, b, n, trial));
                    }
                }
            }
        }
    }
    let run = || {
        ids.par_iter()
            .map(|&(a, b, n, trial)| {
                let seed = case_seed(cfg.seed, a, b, n, trial);
                let spec = ProgressionSpec::new(a, b).expect("grid bounds start at 1");
                let seq = ExponentSeq::random(seed, cfg.exponent_max, n)
                    .expect("nonempty sequence with positive bound");
                let guided = certify_guided(&spec, &seq);
                let exhaustive = certify_exhaustive(&spec, &seq);
                map(CaseOutcome { a, b, n, trial, case_seed: seed, seq, guided, exhaustive })
            })
            .collect::<Vec<R>>()
    };
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    }
}

/// Tallies for a scan summary. `max_abs_vp` is taken over both finders'
/// prime witnesses; the kind counts follow the guided certificate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GridSummary {
    pub cases: u64,
    pub less_than_one: u64,
    pub prime_witness: u64,
    pub max_abs_vp: u64,
    pub failures: u64,
}

impl GridSummary {
    pub fn absorb(&mut self, outcome: &CaseOutcome) {
        self.cases += 1;
        if outcome.failure().is_some() {
            self.failures += 1;
        }
        if let Ok(cert) = &outcome.guided {
            match cert.kind {
                CertificateKind::LessThanOne => self.less_than_one += 1,
                CertificateKind::PrimeWitness { .. } => self.prime_witness += 1,
            }
        }
        for result in [&outcome.guided, &outcome.exhaustive] {
            if let Ok(Certificate { kind: CertificateKind::PrimeWitness { vp, .. }, .. }) =
                result
            {
                self.max_abs_vp = self.max_abs_vp.max(vp.unsigned_abs());
            }
        }
    }

    pub fn merge(mut self, other: GridSummary) -> GridSummary {
        self.cases += other.cases;
        self.less_than_one += other.less_than_one;
        self.prime_witness += other.prime_witness;
        self.max_abs_vp = self.max_abs_vp.max(other.max_abs_vp);
        self.failures += other.failures;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_verifies_and_is_deterministic() {
        let cfg = GridConfig {
            a_max: 3,
            b_max: 3,
            n_min: 2,
            n_max: 10,
            trials: 2,
            exponent_max: 4,
            seed: 7,
        };
        let map = |o: CaseOutcome| {
            (
                o.a,
                o.b,
                o.n,
                o.trial,
                o.case_seed,
                o.failure(),
                o.guided.map(|c| format!("{:?}", c.kind)),
            )
        };
        let one = run_grid(&cfg, Some(1), map);
        let many = run_grid(&cfg, Some(8), map);
        assert_eq!(one.len() as u64, cfg.case_count());
        assert_eq!(one.len(), 3 * 3 * 9 * 2);
        assert_eq!(one, many);
        for (a, b, n, trial, _, failure, _) in &one {
            assert!(failure.is_none(), "failure at a={a} b={b} n={n} trial={trial}: {failure:?}");
        }
        // grid order
        assert!(one.windows(2).all(|w| {
            (w[0].0, w[0].1, w[0].2, w[0].3) < (w[1].0, w[1].1, w[1].2, w[1].3)
        }));
    }

    #[test]
    fn empty_grid() {
        let cfg = GridConfig {
            a_max: 3,
            b_max: 3,
            n_min: 2,
            n_max: 1,
            trials: 2,
            exponent_max: 4,
            seed: 7,
        };
        assert_eq!(cfg.case_count(), 0);
        let rows = run_grid(&cfg, None, |o| o.failure());
        assert!(rows.is_empty());
    }

    #[test]
    fn summary_tallies() {
        let cfg = GridConfig {
            a_max: 2,
            b_max: 2,
            n_min: 2,
            n_max: 6,
            trials: 1,
            exponent_max: 3,
            seed: 1,
        };
        let parts = run_grid(&cfg, None, |o| {
            let mut s = GridSummary::default();
            s.absorb(&o);
            s
        });
        let total = parts.into_iter().fold(GridSummary::default(), GridSummary::merge);
        assert_eq!(total.cases, cfg.case_count());
        assert_eq!(total.failures, 0);
        assert_eq!(total.less_than_one + total.prime_witness, total.cases);
        assert!(total.max_abs_vp >= 1);
    }
}
