//! Distance functions of the alpha and L_p families.
//!
//! The alpha family is written in terms of the coordinate-difference extremes
//! Δ (max) and δ (min): `d_α = Δ + (k − 1)·δ` with `k = 1 + sec α − tan α`.
//! `k = 2` is the taxicab metric, `k = √2` the Chinese-checker metric and
//! `k → 1` approaches the maximum metric.

use std::fmt;

use thiserror::Error;

use crate::geom::{ParseScalarError, Point, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("alpha parameter k must lie in (1, 2], got {0}")]
    KOutOfRange(String),
    #[error("alpha angle must lie in [0, pi/2), got {0}")]
    AngleOutOfRange(f64),
    #[error("L_p exponent must be >= 1, got {0}")]
    ExponentTooSmall(f64),
    #[error("metric `{0}` takes irrational values and cannot be evaluated in exact mode")]
    NotExact(String),
    #[error("cannot parse metric `{0}`")]
    Syntax(String),
    #[error(transparent)]
    Number(#[from] ParseScalarError),
}

/// L_p exponent; `p = ∞` is a first-class value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self, MetricError> {
        if p.is_nan() || p < 1.0 {
            return Err(MetricError::ExponentTooSmall(p));
        }
        Ok(if p.is_infinite() {
            Exponent::Infinity
        } else {
            Exponent::Finite(p)
        })
    }

    pub fn value(&self) -> f64 {
        match self {
            Exponent::Finite(p) => *p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `p ∈ {1, ∞}`: the unit ball is a polygon and distances are rational.
    pub fn is_polygonal(&self) -> bool {
        matches!(self, Exponent::Infinity | Exponent::Finite(1.0))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

/// A metric of the plane together with its family parameter.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric<S> {
    Euclidean,
    /// `d = Δ + (k − 1)·δ`, `1 < k ≤ 2`.
    Alpha {
        k: S,
    },
    Lp(Exponent),
}

impl<S: Scalar> Metric<S> {
    pub fn alpha_k(k: S) -> Result<Self, MetricError> {
        if k <= S::one() || k > S::from_int(2) {
            return Err(MetricError::KOutOfRange(k.to_string()));
        }
        Ok(Metric::Alpha { k })
    }

    pub fn taxicab() -> Self {
        Metric::Alpha { k: S::from_int(2) }
    }

    pub fn lp(p: f64) -> Result<Self, MetricError> {
        Ok(Metric::Lp(Exponent::new(p)?))
    }

    pub fn max() -> Self {
        Metric::Lp(Exponent::Infinity)
    }

    /// Whether distances and unit balls are rational, i.e. usable in exact
    /// mode.
    pub fn is_rational(&self) -> bool {
        match self {
            Metric::Euclidean => false,
            Metric::Alpha { .. } => true,
            Metric::Lp(p) => p.is_polygonal(),
        }
    }

    /// Fails when an exact-mode computation is requested for an irrational
    /// family.
    pub fn check_mode(&self) -> Result<(), MetricError> {
        if S::is_exact() && !self.is_rational() {
            return Err(MetricError::NotExact(self.to_string()));
        }
        Ok(())
    }

    /// Parses `euclidean`, `alpha:<radians>`, `alpha-k:<k>`, `lp:<p>` and
    /// `lp:inf`.
    pub fn parse(text: &str) -> Result<Self, MetricError> {
        let t = text.trim();
        let metric = if t == "euclidean" {
            Metric::Euclidean
        } else if let Some(k) = t.strip_prefix("alpha-k:") {
            Metric::alpha_k(S::parse_text(k)?)?
        } else if let Some(angle) = t.strip_prefix("alpha:") {
            let angle: f64 = angle
                .trim()
                .parse()
                .map_err(|_| MetricError::Syntax(t.to_string()))?;
            if S::is_exact() {
                return Err(MetricError::NotExact(t.to_string()));
            }
            let k = k_from_angle(angle)?;
            Metric::alpha_k(S::from_float(k).ok_or_else(|| MetricError::Syntax(t.to_string()))?)?
        } else if let Some(p) = t.strip_prefix("lp:") {
            let p = p.trim();
            if p == "inf" || p == "∞" {
                Metric::max()
            } else {
                let value = f64::parse_text(p)?;
                Metric::lp(value)?
            }
        } else {
            return Err(MetricError::Syntax(t.to_string()));
        };
        metric.check_mode()?;
        Ok(metric)
    }

    pub fn to_f64(&self) -> Metric<f64> {
        match self {
            Metric::Euclidean => Metric::Euclidean,
            Metric::Alpha { k } => Metric::Alpha { k: k.to_float() },
            Metric::Lp(p) => Metric::Lp(*p),
        }
    }
}

impl Metric<f64> {
    /// Alpha metric from the angle `α ∈ [0, π/2)`.
    pub fn alpha_angle(alpha: f64) -> Result<Self, MetricError> {
        Metric::alpha_k(k_from_angle(alpha)?)
    }
}

impl<S: Scalar> fmt::Display for Metric<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Euclidean => f.write_str("euclidean"),
            Metric::Alpha { k } => write!(f, "alpha-k:{k}"),
            Metric::Lp(p) => write!(f, "lp:{p}"),
        }
    }
}

/// `k = 1 + sec α − tan α`, computed as `1 + cos α / (1 + sin α)` which is
/// the same quantity without the cancellation near `π/2`.
pub fn k_from_angle(alpha: f64) -> Result<f64, MetricError> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&alpha) {
        return Err(MetricError::AngleOutOfRange(alpha));
    }
    Ok(1.0 + alpha.cos() / (1.0 + alpha.sin()))
}

/// Δ: the larger absolute coordinate difference.
pub fn delta_max<S: Scalar>(a: &Point<S>, b: &Point<S>) -> S {
    let (dx, dy) = abs_diffs(a, b);
    S::max_of(dx, dy)
}

/// δ: the smaller absolute coordinate difference.
pub fn delta_min<S: Scalar>(a: &Point<S>, b: &Point<S>) -> S {
    let (dx, dy) = abs_diffs(a, b);
    S::min_of(dx, dy)
}

fn abs_diffs<S: Scalar>(a: &Point<S>, b: &Point<S>) -> (S, S) {
    (
        (a.x.clone() - b.x.clone()).abs(),
        (a.y.clone() - b.y.clone()).abs(),
    )
}

/// Distance between two points in the given metric.
pub fn distance<S: Scalar>(m: &Metric<S>, a: &Point<S>, b: &Point<S>) -> Result<S, MetricError> {
    m.check_mode()?;
    let big = delta_max(a, b);
    let small = delta_min(a, b);
    let value = match m {
        Metric::Alpha { k } => big + (k.clone() - S::one()) * small,
        Metric::Lp(Exponent::Infinity) => big,
        Metric::Lp(Exponent::Finite(p)) if *p == 1.0 => big + small,
        Metric::Lp(Exponent::Finite(p)) => {
            S::from_float(planar_lp(big.to_float(), small.to_float(), *p)).unwrap_or(big)
        }
        Metric::Euclidean => S::from_float(big.to_float().hypot(small.to_float())).unwrap_or(big),
    };
    Ok(value)
}

/// `(Δ^p + δ^p)^{1/p}` evaluated as `Δ·(1 + (δ/Δ)^p)^{1/p}` to avoid
/// overflow for large `p`.
fn planar_lp(big: f64, small: f64, p: f64) -> f64 {
    if big == 0.0 {
        return 0.0;
    }
    big * (1.0 + (small / big).powf(p)).powf(1.0 / p)
}

/// The p-norm of a vector of any dimension.
pub fn lp_norm(v: &[f64], p: Exponent) -> Result<f64, MetricError> {
    let p = match p {
        Exponent::Infinity => return Ok(v.iter().fold(0.0f64, |m, x| m.max(x.abs()))),
        Exponent::Finite(p) if p.is_nan() || p < 1.0 => {
            return Err(MetricError::ExponentTooSmall(p))
        }
        Exponent::Finite(p) => p,
    };
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = v.iter().map(|x| (x.abs() / scale).powf(p)).sum();
    Ok(scale * sum.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rational;

    fn pt(x: f64, y: f64) -> Point<f64> {
        Point::new(x, y)
    }

    fn rpt(x: i64, y: i64) -> Point<Rational> {
        Point::new(Rational::from_int(x), Rational::from_int(y))
    }

    #[test]
    fn deltas() {
        assert_eq!(delta_max(&pt(0.0, 0.0), &pt(3.0, 4.0)), 4.0);
        assert_eq!(delta_min(&pt(0.0, 0.0), &pt(3.0, 4.0)), 3.0);
        assert_eq!(delta_max(&pt(2.0, 2.0), &pt(2.0, 2.0)), 0.0);
        assert_eq!(delta_min(&pt(2.0, 2.0), &pt(2.0, 2.0)), 0.0);
        assert_eq!(delta_max(&rpt(1, 1), &rpt(-2, 1)), Rational::from_int(3));
        assert_eq!(delta_min(&rpt(1, 1), &rpt(-2, 1)), Rational::from_int(0));
    }

    #[test]
    fn distance_examples() {
        let o = pt(0.0, 0.0);
        assert_eq!(
            distance(&Metric::Euclidean, &o, &pt(3.0, 4.0)).unwrap(),
            5.0
        );
        let taxi = Metric::<Rational>::alpha_k(Rational::from_int(2)).unwrap();
        assert_eq!(
            distance(&taxi, &rpt(0, 0), &rpt(3, 4)).unwrap(),
            Rational::from_int(7)
        );
        let l3 = Metric::lp(3.0).unwrap();
        let d = distance(&l3, &o, &pt(1.0, 1.0)).unwrap();
        assert!((d - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        let cc = Metric::alpha_angle(std::f64::consts::FRAC_PI_4).unwrap();
        let d = distance(&cc, &o, &pt(3.0, 4.0)).unwrap();
        assert!((d - (4.0 + 3.0 * (2f64.sqrt() - 1.0))).abs() < 1e-14);
    }

    /// Chinese-checker oracle: the shortest path made of one diagonal and one
    /// axis-parallel segment, minimized over the split point.
    #[test]
    fn chinese_checker_matches_path_enumeration() {
        let (dx, dy) = (3.0f64, 4.0f64);
        let mut best = f64::INFINITY;
        // Diagonal of length t·√2 covering (t, t), then axis run of the rest.
        for i in 0..=3000 {
            let t = dx * i as f64 / 3000.0;
            let len = t * 2f64.sqrt() + (dx - t) + (dy - t);
            best = best.min(len);
        }
        let cc = Metric::alpha_k(2f64.sqrt()).unwrap();
        let d = distance(&cc, &pt(0.0, 0.0), &pt(dx, dy)).unwrap();
        assert!((d - best).abs() < 1e-12, "{d} vs {best}");
    }

    #[test]
    fn exact_mode_rejects_irrational_families() {
        assert!(matches!(
            distance(&Metric::<Rational>::Euclidean, &rpt(0, 0), &rpt(3, 4)),
            Err(MetricError::NotExact(_))
        ));
        assert!(Metric::<Rational>::parse("lp:2").is_err());
        assert!(Metric::<Rational>::parse("alpha:0.5").is_err());
        assert!(Metric::<Rational>::parse("lp:1").is_ok());
        assert!(Metric::<Rational>::parse("lp:inf").is_ok());
        let m = Metric::<Rational>::max();
        assert_eq!(
            distance(&m, &rpt(0, 0), &rpt(3, 4)).unwrap(),
            Rational::from_int(4)
        );
    }

    #[test]
    fn parse_and_display() {
        let m = Metric::<Rational>::parse("alpha-k:3/2").unwrap();
        assert_eq!(
            m,
            Metric::Alpha {
                k: Rational::from_ratio(3, 2)
            }
        );
        assert_eq!(m.to_string(), "alpha-k:3/2");
        assert_eq!(Metric::<f64>::parse("lp:inf").unwrap(), Metric::max());
        assert_eq!(Metric::<f64>::parse("lp:3").unwrap().to_string(), "lp:3");
        assert_eq!(
            Metric::<f64>::parse("euclidean").unwrap(),
            Metric::Euclidean
        );
        let a = Metric::<f64>::parse("alpha:0").unwrap();
        assert_eq!(a, Metric::Alpha { k: 2.0 });
        assert!(Metric::<f64>::parse("alpha-k:1").is_err());
        assert!(Metric::<f64>::parse("alpha-k:5/2").is_err());
        assert!(Metric::<f64>::parse("lp:0.5").is_err());
        assert!(Metric::<f64>::parse("minkowski").is_err());
        assert!(Metric::<f64>::parse("alpha:1.5708").is_err());
    }

    #[test]
    fn k_angle_relation() {
        assert_eq!(k_from_angle(0.0).unwrap(), 2.0);
        let k = k_from_angle(std::f64::consts::FRAC_PI_4).unwrap();
        assert!((k - 2f64.sqrt()).abs() < 1e-15);
        let a = 1.2f64;
        let direct = 1.0 + 1.0 / a.cos() - a.tan();
        assert!((k_from_angle(a).unwrap() - direct).abs() < 1e-14);
        assert!(k_from_angle(std::f64::consts::FRAC_PI_2 - 1e-7).unwrap() > 1.0);
    }

    #[test]
    fn lp_norm_examples() {
        assert_eq!(lp_norm(&[3.0, 4.0], Exponent::Finite(2.0)).unwrap(), 5.0);
        assert_eq!(lp_norm(&[3.0, 4.0], Exponent::Infinity).unwrap(), 4.0);
        assert_eq!(lp_norm(&[1.0, 1.0], Exponent::Finite(1.0)).unwrap(), 2.0);
        assert_eq!(
            lp_norm(&[0.0, 0.0, 0.0], Exponent::Finite(3.0)).unwrap(),
            0.0
        );
        assert!(lp_norm(&[1.0], Exponent::Finite(0.5)).is_err());
        assert!(Exponent::new(0.9).is_err());
        assert_eq!(Exponent::new(f64::INFINITY).unwrap(), Exponent::Infinity);
    }
}
