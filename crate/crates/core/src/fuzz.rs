//! Randomized Monge checks on admissible circle triples.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circles::Circle;
use crate::geom::{Point, Rational, Scalar};
use crate::instance::InstanceFile;
use crate::metrics::{Exponent, Metric};
use crate::monge::{admissibility, verify_monge, MongeError};

/// Exponents drawn for the `lp` family.
pub const LP_EXPONENTS: [Exponent; 6] = [
    Exponent::Finite(1.0),
    Exponent::Finite(1.5),
    Exponent::Finite(2.0),
    Exponent::Finite(3.0),
    Exponent::Finite(7.0),
    Exponent::Infinity,
];

const MAX_RADIUS_DENOMINATOR: i64 = 8;
const MAX_K_DENOMINATOR: i64 = 16;
const MAX_RESAMPLES: usize = 100_000;

#[derive(Debug, Error)]
pub enum FuzzError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("coordinate range must be positive")]
    CoordinateRange,
    #[error(
        "radius range must satisfy 0 < min <= max and contain a fraction with denominator <= 8"
    )]
    RadiusRange,
    #[error("no admissible triple found after {MAX_RESAMPLES} samples")]
    NoAdmissible,
    #[error("unknown family `{0}` (expected alpha, lp or euclidean)")]
    Family(String),
    #[error(transparent)]
    Monge(#[from] MongeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Exact arithmetic, random rational `k ∈ (1, 2]`.
    Alpha,
    /// Float arithmetic, `p` drawn from [`LP_EXPONENTS`].
    Lp,
    Euclidean,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Alpha => "alpha",
            Family::Lp => "lp",
            Family::Euclidean => "euclidean",
        })
    }
}

impl FromStr for Family {
    type Err = FuzzError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha" => Ok(Family::Alpha),
            "lp" => Ok(Family::Lp),
            "euclidean" => Ok(Family::Euclidean),
            other => Err(FuzzError::Family(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzConfig {
    pub family: Family,
    pub trials: usize,
    pub seed: u64,
    /// Centers are lattice points in `[-coord_range, coord_range]²`.
    pub coord_range: i64,
    /// Radii are fractions with denominator at most 8 in this interval.
    pub radius_range: (f64, f64),
}

impl FuzzConfig {
    pub fn new(family: Family, trials: usize, seed: u64) -> Self {
        FuzzConfig {
            family,
            trials,
            seed,
            coord_range: 20,
            radius_range: (0.5, 6.0),
        }
    }

    fn validate(&self) -> Result<(), FuzzError> {
        if self.trials == 0 {
            return Err(FuzzError::NoTrials);
        }
        if self.coord_range <= 0 {
            return Err(FuzzError::CoordinateRange);
        }
        let (lo, hi) = self.radius_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) || radius_choices(lo, hi).is_empty() {
            return Err(FuzzError::RadiusRange);
        }
        Ok(())
    }
}

fn radius_choices(lo: f64, hi: f64) -> Vec<(i64, i64)> {
    (1..=MAX_RADIUS_DENOMINATOR)
        .filter_map(|d| {
            let n0 = (lo * d as f64).ceil() as i64;
            let n1 = (hi * d as f64).floor() as i64;
            (n0.max(1) <= n1).then_some((d, n0.max(1), n1))
        })
        .flat_map(|(d, n0, n1)| (n0..=n1).map(move |n| (n, d)))
        .collect()
}

/// Outcome of one trial.
#[derive(Debug, Clone)]
pub struct Trial {
    pub index: usize,
    pub instance: InstanceFile,
    pub passed: bool,
    pub collinearity_closed: f64,
    pub collinearity_tangent: Option<f64>,
    pub max_residual: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub trials: Vec<Trial>,
}

impl FuzzSummary {
    pub fn failures(&self) -> impl Iterator<Item = &Trial> {
        self.trials.iter().filter(|t| !t.passed)
    }

    pub fn failure_count(&self) -> usize {
        self.failures().count()
    }

    fn max_of(&self, f: impl Fn(&Trial) -> f64) -> f64 {
        self.trials.iter().map(f).fold(0.0, f64::max)
    }

    pub fn max_collinearity_closed(&self) -> f64 {
        self.max_of(|t| t.collinearity_closed)
    }

    pub fn max_collinearity_tangent(&self) -> f64 {
        self.max_of(|t| t.collinearity_tangent.unwrap_or(f64::INFINITY))
    }

    pub fn max_residual(&self) -> f64 {
        self.max_of(|t| t.max_residual)
    }

    /// Deterministic text report; failing instances are echoed as JSON.
    pub fn render(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let _ = writeln!(out, "family: {}", c.family);
        let _ = writeln!(out, "trials: {}", c.trials);
        let _ = writeln!(out, "seed: {}", c.seed);
        let _ = writeln!(
            out,
            "max collinearity residual (closed form): {:.3e}",
            self.max_collinearity_closed()
        );
        let _ = writeln!(
            out,
            "max collinearity residual (tangents): {:.3e}",
            self.max_collinearity_tangent()
        );
        let _ = writeln!(out, "max residual: {:.3e}", self.max_residual());
        let _ = writeln!(out, "failures: {}", self.failure_count());
        for t in self.failures() {
            let _ = writeln!(
                out,
                "FAIL trial {}: {}",
                t.index,
                t.instance.to_json_string()
            );
            for note in &t.notes {
                let _ = writeln!(out, "  note: {note}");
            }
        }
        out
    }
}

fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn random_triple<S: Scalar>(
    rng: &mut ChaCha8Rng,
    cfg: &FuzzConfig,
    metric: &Metric<S>,
) -> Result<[Circle<S>; 3], FuzzError> {
    let radii = radius_choices(cfg.radius_range.0, cfg.radius_range.1);
    let r = cfg.coord_range;
    for _ in 0..MAX_RESAMPLES {
        let mut make = || {
            let center = Point::new(
                S::from_int(rng.gen_range(-r..=r)),
                S::from_int(rng.gen_range(-r..=r)),
            );
            let (n, d) = radii[rng.gen_range(0..radii.len())];
            Circle::new(center, S::from_ratio(n, d), metric.clone()).expect("positive radius")
        };
        let triple = [make(), make(), make()];
        let adm = admissibility([&triple[0], &triple[1], &triple[2]])?;
        if adm.is_admissible() && adm.distinct_radii {
            return Ok(triple);
        }
    }
    Err(FuzzError::NoAdmissible)
}

fn check<S: Scalar>(index: usize, triple: [Circle<S>; 3]) -> Result<Trial, FuzzError> {
    let report = verify_monge(&triple[0], &triple[1], &triple[2])?;
    Ok(Trial {
        index,
        instance: InstanceFile::from_circles(&triple),
        passed: report.passed,
        collinearity_closed: report.residuals.collinearity_closed,
        collinearity_tangent: report.residuals.collinearity_tangent,
        max_residual: report.residuals.max(),
        notes: report.notes,
    })
}

/// Runs a single trial; trials are independent given the seed.
pub fn run_trial(cfg: &FuzzConfig, index: usize) -> Result<Trial, FuzzError> {
    let mut rng = trial_rng(cfg.seed, index);
    match cfg.family {
        Family::Alpha => {
            let den = rng.gen_range(1..=MAX_K_DENOMINATOR);
            let num = rng.gen_range(1..=den);
            let metric =
                Metric::alpha_k(Rational::from_ratio(den + num, den)).expect("k in (1, 2]");
            check(index, random_triple::<Rational>(&mut rng, cfg, &metric)?)
        }
        Family::Lp => {
            let metric = Metric::<f64>::Lp(LP_EXPONENTS[rng.gen_range(0..LP_EXPONENTS.len())]);
            check(index, random_triple(&mut rng, cfg, &metric)?)
        }
        Family::Euclidean => check(
            index,
            random_triple(&mut rng, cfg, &Metric::<f64>::Euclidean)?,
        ),
    }
}

pub fn run(cfg: &FuzzConfig) -> Result<FuzzSummary, FuzzError> {
    cfg.validate()?;
    let trials = (0..cfg.trials)
        .map(|i| run_trial(cfg, i))
        .collect::<Result<_, _>>()?;
    Ok(FuzzSummary {
        config: cfg.clone(),
        trials,
    })
}
