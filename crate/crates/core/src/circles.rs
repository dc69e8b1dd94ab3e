//! Metric circles and their boundaries.
//!
//! Alpha circles and L_1 / L_∞ circles are convex polygons whose vertices are
//! exact whenever the center, radius and `k` are rational. The remaining L_p
//! circles are smooth convex curves handled numerically in float mode.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

use crate::geom::{GeomError, Line, Point, Scalar};
use crate::metrics::{distance, Exponent, Metric, MetricError};

/// Samples per curve used for bracketing and oracles.
pub const CURVE_SAMPLES: usize = 4096;

/// Coarse grid used to bracket the support maximizer.
pub const SUPPORT_GRID: usize = 64;

/// Bracket width at which curve parameter searches stop.
pub const PARAM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircleError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(String),
    #[error("support direction must be nonzero")]
    ZeroDirection,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Inside,
    On,
    Outside,
}

/// The set `{X : d(M, X) = r}` for a given metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Circle<S> {
    center: Point<S>,
    radius: S,
    metric: Metric<S>,
}

impl<S: Scalar> Circle<S> {
    pub fn new(center: Point<S>, radius: S, metric: Metric<S>) -> Result<Self, CircleError> {
        if radius <= S::zero() {
            return Err(CircleError::NonPositiveRadius(radius.to_string()));
        }
        metric.check_mode()?;
        Ok(Circle {
            center,
            radius,
            metric,
        })
    }

    pub fn center(&self) -> &Point<S> {
        &self.center
    }

    pub fn radius(&self) -> &S {
        &self.radius
    }

    pub fn metric(&self) -> &Metric<S> {
        &self.metric
    }

    pub fn to_f64(&self) -> Circle<f64> {
        Circle {
            center: self.center.to_f64(),
            radius: self.radius.to_float(),
            metric: self.metric.to_f64(),
        }
    }

    /// Same metric, translated center and scaled radius.
    pub fn with(&self, center: Point<S>, radius: S) -> Result<Self, CircleError> {
        Circle::new(center, radius, self.metric.clone())
    }

    /// Polygon for the alpha, L_1 and L_∞ families, parametric curve
    /// otherwise.
    pub fn boundary(&self) -> Boundary<S> {
        let unit = match &self.metric {
            Metric::Alpha { k } => {
                unit_octagon(k).expect("alpha metric parameter validated at construction")
            }
            Metric::Lp(Exponent::Infinity) => unit_square(),
            Metric::Lp(Exponent::Finite(p)) if *p == 1.0 => unit_diamond(),
            Metric::Lp(Exponent::Finite(p)) => {
                return Boundary::Curve(LpCurve {
                    center: self.center.to_f64(),
                    radius: self.radius.to_float(),
                    p: *p,
                })
            }
            Metric::Euclidean => {
                return Boundary::Curve(LpCurve {
                    center: self.center.to_f64(),
                    radius: self.radius.to_float(),
                    p: 2.0,
                })
            }
        };
        Boundary::Polygon(unit.scaled(&self.center, &self.radius))
    }

    /// Inside / on / outside; "on" is exact in rational mode and a 1e-9
    /// relative band in float mode.
    pub fn classify(&self, x: &Point<S>) -> Result<Position, CircleError> {
        let d = distance(&self.metric, &self.center, x)?;
        let scale = self.radius.to_float().abs().max(1.0) - 1.0;
        Ok(match d.cmp_tol(&self.radius, scale) {
            Ordering::Less => Position::Inside,
            Ordering::Equal => Position::On,
            Ordering::Greater => Position::Outside,
        })
    }

    /// Supporting line with outward normal `n`: the circle lies in
    /// `⟨n, X⟩ ≤ h`.
    pub fn support_line(&self, n: &Point<S>) -> Result<Support<S>, CircleError> {
        if n.is_zero() {
            return Err(CircleError::ZeroDirection);
        }
        match self.boundary() {
            Boundary::Polygon(poly) => Ok(poly.support(n)?),
            Boundary::Curve(curve) => {
                let nf = n.to_f64();
                let t = curve.support_param(&nf);
                let pf = curve.point(t);
                let point = Point::new(
                    S::from_float(pf.x).expect("finite curve point"),
                    S::from_float(pf.y).expect("finite curve point"),
                );
                let offset =
                    S::from_float(curve.support_value_at(&nf, t)).expect("finite support value");
                Ok(Support {
                    line: Line::from_normal(n, offset.clone())?,
                    offset,
                    touch: Touch::Param { t, point },
                })
            }
        }
    }

    /// `h(n) = max over the circle of ⟨n, X⟩`.
    pub fn support_value(&self, n: &Point<S>) -> Result<S, CircleError> {
        Ok(self.support_line(n)?.offset)
    }
}

/// Boundary representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Boundary<S> {
    Polygon(Polygon<S>),
    Curve(LpCurve),
}

impl<S: Scalar> Boundary<S> {
    /// Polygon vertices, or `samples` evenly spaced curve points.
    pub fn points_f64(&self, samples: usize) -> Vec<Point<f64>> {
        match self {
            Boundary::Polygon(p) => p.vertices.iter().map(Point::to_f64).collect(),
            Boundary::Curve(c) => c.sample(samples),
        }
    }
}

/// Convex counterclockwise polygon. `collinear[i]` flags a vertex lying on
/// the segment between its neighbours (the taxicab octagon at `k = 2`).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon<S> {
    vertices: Vec<Point<S>>,
    collinear: Vec<bool>,
}

impl<S: Scalar> Polygon<S> {
    pub fn new(vertices: Vec<Point<S>>) -> Self {
        let n = vertices.len();
        let collinear = (0..n)
            .map(|i| {
                let prev = &vertices[(i + n - 1) % n];
                let next = &vertices[(i + 1) % n];
                let turn = vertices[i].sub(prev).cross(&next.sub(&vertices[i]));
                let scale = prev.max_abs().max(next.max_abs());
                turn.sign_tol(scale * scale) == Ordering::Equal
            })
            .collect();
        Polygon {
            vertices,
            collinear,
        }
    }

    pub fn vertices(&self) -> &[Point<S>] {
        &self.vertices
    }

    pub fn collinear_flags(&self) -> &[bool] {
        &self.collinear
    }

    /// Vertices with the flagged collinear ones removed.
    pub fn corners(&self) -> Vec<Point<S>> {
        self.vertices
            .iter()
            .zip(&self.collinear)
            .filter(|(_, c)| !**c)
            .map(|(v, _)| v.clone())
            .collect()
    }

    fn scaled(&self, center: &Point<S>, r: &S) -> Polygon<S> {
        Polygon {
            vertices: self
                .vertices
                .iter()
                .map(|v| center.add(&v.scale(r)))
                .collect(),
            collinear: self.collinear.clone(),
        }
    }

    pub fn support(&self, n: &Point<S>) -> Result<Support<S>, GeomError> {
        let values: Vec<S> = self.vertices.iter().map(|v| n.dot(v)).collect();
        let best = values
            .iter()
            .cloned()
            .reduce(S::max_of)
            .expect("polygon has vertices");
        let scale = self.vertices.iter().map(Point::max_abs).fold(0.0, f64::max) * n.max_abs();
        let touching: Vec<usize> = values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.cmp_tol(&best, scale) == Ordering::Equal)
            .map(|(i, _)| i)
            .collect();
        let count = self.vertices.len();
        let touch = if touching.len() == 1 {
            let i = touching[0];
            Touch::Vertex {
                index: i,
                point: self.vertices[i].clone(),
            }
        } else {
            // Endpoints of the cyclic run of touching vertices.
            let start = *touching
                .iter()
                .find(|&&i| !touching.contains(&((i + count - 1) % count)))
                .unwrap_or(&touching[0]);
            let end = *touching
                .iter()
                .find(|&&i| !touching.contains(&((i + 1) % count)))
                .unwrap_or(&touching[touching.len() - 1]);
            Touch::Edge {
                indices: (start, end),
                points: (self.vertices[start].clone(), self.vertices[end].clone()),
            }
        };
        Ok(Support {
            line: Line::from_normal(n, best.clone())?,
            offset: best,
            touch,
        })
    }
}

/// Where a support line meets the boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum Touch<S> {
    Vertex {
        index: usize,
        point: Point<S>,
    },
    /// A whole edge, given by its endpoints in counterclockwise order.
    Edge {
        indices: (usize, usize),
        points: (Point<S>, Point<S>),
    },
    /// Curve parameter of the touching point.
    Param {
        t: f64,
        point: Point<S>,
    },
}

impl<S: Scalar> Touch<S> {
    /// One boundary point on the support line.
    pub fn point(&self) -> &Point<S> {
        match self {
            Touch::Vertex { point, .. } | Touch::Param { point, .. } => point,
            Touch::Edge { points, .. } => &points.0,
        }
    }

    /// All reported boundary points on the support line.
    pub fn points(&self) -> Vec<&Point<S>> {
        match self {
            Touch::Vertex { point, .. } | Touch::Param { point, .. } => vec![point],
            Touch::Edge { points, .. } => vec![&points.0, &points.1],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Support<S> {
    pub line: Line<S>,
    pub offset: S,
    pub touch: Touch<S>,
}

/// The eight corners `(1,0), (1/k,1/k), (0,1), …, (1/k,−1/k)` of the unit
/// alpha circle, counterclockwise from `(1, 0)`.
pub fn unit_circle_vertices<S: Scalar>(k: &S) -> Result<[Point<S>; 8], MetricError> {
    if *k <= S::one() || *k > S::from_int(2) {
        return Err(MetricError::KOutOfRange(k.to_string()));
    }
    let (one, zero) = (S::one(), S::zero());
    let d = S::one() / k.clone();
    let p = |x: &S, y: &S| Point::new(x.clone(), y.clone());
    Ok([
        p(&one, &zero),
        p(&d, &d),
        p(&zero, &one),
        p(&-d.clone(), &d),
        p(&-one.clone(), &zero),
        p(&-d.clone(), &-d.clone()),
        p(&zero, &-one.clone()),
        p(&d, &-d.clone()),
    ])
}

/// Unit alpha circle as a flagged polygon.
pub fn unit_octagon<S: Scalar>(k: &S) -> Result<Polygon<S>, MetricError> {
    Ok(Polygon::new(unit_circle_vertices(k)?.to_vec()))
}

fn unit_diamond<S: Scalar>() -> Polygon<S> {
    let (o, z) = (S::one(), S::zero());
    Polygon::new(vec![
        Point::new(o.clone(), z.clone()),
        Point::new(z.clone(), o.clone()),
        Point::new(-o.clone(), z.clone()),
        Point::new(z, -o),
    ])
}

fn unit_square<S: Scalar>() -> Polygon<S> {
    let (o, m) = (S::one(), -S::one());
    Polygon::new(vec![
        Point::new(o.clone(), m.clone()),
        Point::new(o.clone(), o.clone()),
        Point::new(m.clone(), o.clone()),
        Point::new(m.clone(), m),
    ])
}

/// `t ↦ M + r·(sgn(cos t)|cos t|^{2/p}, sgn(sin t)|sin t|^{2/p})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpCurve {
    pub center: Point<f64>,
    pub radius: f64,
    pub p: f64,
}

/// `(sin t, cos t)` with `t` reduced to a quadrant first, so multiples of
/// `π/2` give exact zeros. `|sin t|^{2/p}` would otherwise turn the rounding
/// error of `sin(π)` into a visible offset for large `p`.
fn quadrant_sin_cos(t: f64) -> (f64, f64) {
    let q = (t / FRAC_PI_2).floor();
    let (s, c) = (t - q * FRAC_PI_2).sin_cos();
    match (q as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

fn signed_pow(v: f64, e: f64) -> f64 {
    v.signum() * v.abs().powf(e)
}

impl LpCurve {
    pub fn unit_point(&self, t: f64) -> Point<f64> {
        let e = 2.0 / self.p;
        let (s, c) = quadrant_sin_cos(t);
        Point::new(signed_pow(c, e), signed_pow(s, e))
    }

    pub fn point(&self, t: f64) -> Point<f64> {
        let u = self.unit_point(t);
        Point::new(
            self.center.x + self.radius * u.x,
            self.center.y + self.radius * u.y,
        )
    }

    /// A positive multiple of `dX/dt`, finite everywhere:
    /// `(−sgn(sin t)|sin t|^b, sgn(cos t)|cos t|^b)` with `b = 2 − 2/p`.
    pub fn tangent_dir(&self, t: f64) -> Point<f64> {
        let b = 2.0 - 2.0 / self.p;
        let (s, c) = quadrant_sin_cos(t);
        Point::new(-signed_pow(s, b), signed_pow(c, b))
    }

    pub fn param(i: usize, n: usize) -> f64 {
        2.0 * PI * i as f64 / n as f64
    }

    pub fn sample(&self, n: usize) -> Vec<Point<f64>> {
        (0..n).map(|i| self.point(Self::param(i, n))).collect()
    }

    fn support_value_at(&self, n: &Point<f64>, t: f64) -> f64 {
        n.dot(&self.center) + self.radius * n.dot(&self.unit_point(t))
    }

    /// Parameter maximizing `⟨n, X(t)⟩`. The support function is unimodal in
    /// `t`, so the best of [`SUPPORT_GRID`] samples brackets the maximizer;
    /// the bracket is then bisected on the sign of the derivative down to
    /// [`PARAM_TOL`].
    pub fn support_param(&self, n: &Point<f64>) -> f64 {
        let h = |t: f64| n.dot(&self.unit_point(t));
        let step = 2.0 * PI / SUPPORT_GRID as f64;
        let best = (0..SUPPORT_GRID)
            .map(|i| Self::param(i, SUPPORT_GRID))
            .max_by(|a, b| h(*a).total_cmp(&h(*b)))
            .expect("nonempty grid");
        let slope = |t: f64| n.dot(&self.tangent_dir(t));
        let (mut lo, mut hi) = (best - step, best + step);
        if slope(lo) < 0.0 || slope(hi) > 0.0 {
            return best.rem_euclid(2.0 * PI);
        }
        while hi - lo > PARAM_TOL {
            let mid = 0.5 * (lo + hi);
            if slope(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).rem_euclid(2.0 * PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{orient, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn rp(x: Rational, y: Rational) -> Point<Rational> {
        Point::new(x, y)
    }

    #[test]
    fn octagon_vertices() {
        let v = unit_circle_vertices(&q(2, 1)).unwrap();
        assert_eq!(v[0], rp(q(1, 1), q(0, 1)));
        assert_eq!(v[1], rp(q(1, 2), q(1, 2)));
        assert_eq!(
            orient(
                &v[0].homogeneous(),
                &v[1].homogeneous(),
                &v[2].homogeneous()
            ),
            q(0, 1)
        );
        let poly = unit_octagon(&q(2, 1)).unwrap();
        assert_eq!(
            poly.collinear_flags(),
            &[false, true, false, true, false, true, false, true]
        );
        assert_eq!(poly.corners().len(), 4);
        let poly = unit_octagon(&q(3, 2)).unwrap();
        assert!(poly.collinear_flags().iter().all(|c| !c));

        let s = 2f64.sqrt();
        let v = unit_circle_vertices(&s).unwrap();
        assert!((v[1].x - 1.0 / s).abs() < 1e-15 && (v[1].y - 1.0 / s).abs() < 1e-15);
        // A2, A6 on y = x; A4, A8 on y = -x.
        assert_eq!(v[1].x, v[1].y);
        assert_eq!(v[5].x, v[5].y);
        assert_eq!(v[3].x, -v[3].y);
        assert_eq!(v[7].x, -v[7].y);
        assert!(unit_circle_vertices(&1.0).is_err());
        assert!(unit_circle_vertices(&2.5).is_err());
    }

    #[test]
    fn polygon_is_convex_ccw() {
        for k in [q(2, 1), q(3, 2), q(9, 8), q(199, 100)] {
            let v = unit_circle_vertices(&k).unwrap();
            for i in 0..8 {
                let (a, b, c) = (&v[i], &v[(i + 1) % 8], &v[(i + 2) % 8]);
                let turn = orient(&a.homogeneous(), &b.homogeneous(), &c.homogeneous());
                assert!(turn >= q(0, 1));
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let taxi = Circle::new(Point::origin(), q(1, 1), Metric::taxicab()).unwrap();
        let Boundary::Polygon(p) = taxi.boundary() else {
            panic!("polygon expected")
        };
        let corners = p.corners();
        assert_eq!(corners.len(), 4);
        for c in [(1, 0), (0, 1), (-1, 0), (0, -1)] {
            assert!(corners.contains(&rp(q(c.0, 1), q(c.1, 1))));
        }

        let sq = Circle::new(rp(q(1, 1), q(1, 1)), q(2, 1), Metric::max()).unwrap();
        let Boundary::Polygon(p) = sq.boundary() else {
            panic!("polygon expected")
        };
        for c in [(-1, -1), (3, -1), (3, 3), (-1, 3)] {
            assert!(p.vertices().contains(&rp(q(c.0, 1), q(c.1, 1))));
        }

        let euclid = Circle::new(Point::origin(), 1.0, Metric::lp(2.0).unwrap()).unwrap();
        let Boundary::Curve(c) = euclid.boundary() else {
            panic!("curve expected")
        };
        let x = c.point(PI / 4.0);
        let h = 1.0 / 2f64.sqrt();
        assert!((x.x - h).abs() < 1e-15 && (x.y - h).abs() < 1e-15);
    }

    #[test]
    fn curve_symmetry_and_membership() {
        for p in [1.1, 1.5, 3.0, 7.0, 16.0] {
            let circle = Circle::new(Point::new(2.0, -1.0), 3.0, Metric::lp(p).unwrap()).unwrap();
            let Boundary::Curve(c) = circle.boundary() else {
                panic!()
            };
            for i in 0..CURVE_SAMPLES / 2 {
                let t = LpCurve::param(i, CURVE_SAMPLES);
                let a = c.point(t);
                let b = c.point(t + PI);
                assert!((a.x + b.x - 4.0).abs() < 1e-12);
                assert!((a.y + b.y + 2.0).abs() < 1e-12);
                let d = distance(circle.metric(), circle.center(), &a).unwrap();
                assert!((d - 3.0).abs() < 1e-12, "p={p} t={t} d={d}");
            }
        }
    }

    #[test]
    fn classify_examples() {
        let taxi = Circle::new(Point::origin(), q(1, 1), Metric::taxicab()).unwrap();
        assert_eq!(taxi.classify(&rp(q(1, 2), q(1, 2))).unwrap(), Position::On);
        assert_eq!(taxi.classify(&Point::origin()).unwrap(), Position::Inside);
        let cc = Circle::new(Point::origin(), 1.0, Metric::alpha_k(2f64.sqrt()).unwrap()).unwrap();
        assert_eq!(
            cc.classify(&Point::new(0.8, 0.8)).unwrap(),
            Position::Outside
        );
        assert_eq!(
            cc.classify(&Point::new(0.0, 0.0)).unwrap(),
            Position::Inside
        );
    }

    #[test]
    fn support_examples() {
        let taxi = Circle::new(Point::origin(), q(1, 1), Metric::taxicab()).unwrap();
        let s = taxi.support_line(&rp(q(1, 1), q(0, 1))).unwrap();
        assert_eq!(s.offset, q(1, 1));
        assert_eq!(
            s.touch,
            Touch::Vertex {
                index: 0,
                point: rp(q(1, 1), q(0, 1))
            }
        );

        let s = taxi.support_line(&rp(q(1, 1), q(1, 1))).unwrap();
        assert_eq!(s.offset, q(1, 1));
        match &s.touch {
            Touch::Edge { indices, points } => {
                assert_eq!(*indices, (0, 2));
                assert_eq!(points.0, rp(q(1, 1), q(0, 1)));
                assert_eq!(points.1, rp(q(0, 1), q(1, 1)));
            }
            other => panic!("edge expected, got {other:?}"),
        }
        assert!(s
            .line
            .projectively_eq(&Line::new(q(1, 1), q(1, 1), q(-1, 1)).unwrap()));

        let euclid = Circle::new(Point::origin(), 1.0, Metric::lp(2.0).unwrap()).unwrap();
        let s = euclid.support_line(&Point::new(3.0, 4.0)).unwrap();
        assert!((s.offset - 5.0).abs() < 1e-12);
        let expected = Line::new(3.0, 4.0, -5.0).unwrap();
        assert!(crate::geom::line_distance(&s.line, &expected) < 1e-12);

        assert_eq!(
            taxi.support_line(&Point::origin()).unwrap_err(),
            CircleError::ZeroDirection
        );
    }

    #[test]
    fn support_parameter_precision() {
        // The maximizer of ⟨n, u⟩ on the L_p unit circle has the closed form
        // u_i ∝ sgn(n_i)|n_i|^{q−1}; compare touching points.
        for p in [1.5, 2.0, 3.0, 7.0] {
            let curve = LpCurve {
                center: Point::origin(),
                radius: 1.0,
                p,
            };
            let q = p / (p - 1.0);
            for n in [
                Point::new(1.0, 0.3),
                Point::new(-0.2, 1.0),
                Point::new(-1.0, -2.0),
            ] {
                let t = curve.support_param(&n);
                let got = curve.unit_point(t);
                let raw = Point::new(signed_pow(n.x, q - 1.0), signed_pow(n.y, q - 1.0));
                let norm = (raw.x.abs().powf(p) + raw.y.abs().powf(p)).powf(1.0 / p);
                assert!((got.x - raw.x / norm).abs() < 1e-9, "p={p} n={n:?}");
                assert!((got.y - raw.y / norm).abs() < 1e-9, "p={p} n={n:?}");
            }
        }
    }

    #[test]
    fn radius_must_be_positive() {
        assert!(matches!(
            Circle::new(Point::origin(), 0.0, Metric::Euclidean),
            Err(CircleError::NonPositiveRadius(_))
        ));
        assert!(matches!(
            Circle::new(Point::<Rational>::origin(), q(1, 1), Metric::Euclidean),
            Err(CircleError::Metric(MetricError::NotExact(_)))
        ));
    }
}
