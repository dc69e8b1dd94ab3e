//! Points, homogeneous points, lines and the incidence predicates.
//!
//! Homogeneous coordinates are used throughout so that parallel tangent
//! pairs meet at a point with `w = 0` instead of needing a special case.

mod scalar;

pub use scalar::{
    format_sig, parse_rational, ParseScalarError, Rational, Scalar, ScalarMode, FLOAT_TOL,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("homogeneous point has all coordinates zero")]
    ZeroPoint,
    #[error("line has all coefficients zero")]
    ZeroLine,
    #[error("points coincide; no unique line through them")]
    CoincidentPoints,
    #[error("lines are identical; no unique intersection")]
    IdenticalLines,
}

/// Affine point of the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point::new(S::zero(), S::zero())
    }

    pub fn add(&self, other: &Point<S>) -> Point<S> {
        Point::new(
            self.x.clone() + other.x.clone(),
            self.y.clone() + other.y.clone(),
        )
    }

    pub fn sub(&self, other: &Point<S>) -> Point<S> {
        Point::new(
            self.x.clone() - other.x.clone(),
            self.y.clone() - other.y.clone(),
        )
    }

    pub fn scale(&self, s: &S) -> Point<S> {
        Point::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    pub fn dot(&self, other: &Point<S>) -> S {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    /// z-component of the planar cross product.
    pub fn cross(&self, other: &Point<S>) -> S {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    /// Counterclockwise perpendicular.
    pub fn perp(&self) -> Point<S> {
        Point::new(-self.y.clone(), self.x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn max_abs(&self) -> f64 {
        self.x.to_float().abs().max(self.y.to_float().abs())
    }

    pub fn to_f64(&self) -> Point<f64> {
        Point::new(self.x.to_float(), self.y.to_float())
    }

    pub fn homogeneous(&self) -> HPoint<S> {
        HPoint {
            x: self.x.clone(),
            y: self.y.clone(),
            w: S::one(),
        }
    }
}

impl Point<f64> {
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Projective point `(x : y : w)`; `w = 0` is a point at infinity in
/// direction `(x, y)`.
#[derive(Debug, Clone)]
pub struct HPoint<S> {
    x: S,
    y: S,
    w: S,
}

impl<S: Scalar> HPoint<S> {
    pub fn new(x: S, y: S, w: S) -> Result<Self, GeomError> {
        if x.is_zero() && y.is_zero() && w.is_zero() {
            return Err(GeomError::ZeroPoint);
        }
        Ok(HPoint { x, y, w })
    }

    pub fn affine_point(p: &Point<S>) -> Self {
        p.homogeneous()
    }

    pub fn x(&self) -> &S {
        &self.x
    }

    pub fn y(&self) -> &S {
        &self.y
    }

    pub fn w(&self) -> &S {
        &self.w
    }

    pub fn coords(&self) -> [&S; 3] {
        [&self.x, &self.y, &self.w]
    }

    pub fn is_at_infinity(&self) -> bool {
        self.w.is_zero()
    }

    /// Dehomogenized point, `None` at infinity.
    pub fn to_affine(&self) -> Option<Point<S>> {
        if self.w.is_zero() {
            None
        } else {
            Some(Point::new(
                self.x.clone() / self.w.clone(),
                self.y.clone() / self.w.clone(),
            ))
        }
    }

    /// Exact projective equality (cross-ratio test). Float callers want
    /// [`projective_distance`] instead.
    pub fn projectively_eq(&self, other: &HPoint<S>) -> bool {
        let c = |a: &S, b: &S, c: &S, d: &S| a.clone() * d.clone() == c.clone() * b.clone();
        c(&self.x, &self.w, &other.x, &other.w)
            && c(&self.y, &self.w, &other.y, &other.w)
            && c(&self.x, &self.y, &other.x, &other.y)
    }

    pub fn to_f64(&self) -> HPoint<f64> {
        HPoint {
            x: self.x.to_float(),
            y: self.y.to_float(),
            w: self.w.to_float(),
        }
    }

    /// Coordinates divided by their largest magnitude, sign chosen so the
    /// first nonzero of `(w, x, y)` is positive.
    pub fn normalized(&self) -> [f64; 3] {
        let v = [self.x.to_float(), self.y.to_float(), self.w.to_float()];
        let m = v.iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
        if m == 0.0 {
            return v;
        }
        let sign = [v[2], v[0], v[1]]
            .into_iter()
            .find(|c| *c != 0.0)
            .map(f64::signum)
            .unwrap_or(1.0);
        [v[0] / m * sign, v[1] / m * sign, v[2] / m * sign]
    }
}

impl HPoint<f64> {
    pub fn affine(x: f64, y: f64) -> Self {
        HPoint { x, y, w: 1.0 }
    }
}

impl HPoint<Rational> {
    pub fn affine_int(x: i64, y: i64) -> Self {
        HPoint {
            x: Rational::from_int(x),
            y: Rational::from_int(y),
            w: Rational::from_int(1),
        }
    }
}

/// Line `a·x + b·y + c·w = 0`, stored in canonical scale (see
/// [`Scalar::line_scale`]). Orientation is preserved by canonicalization, so
/// `a·x + b·y + c` has a meaningful sign. Equality compares the canonical
/// coefficients, so it is orientation-sensitive; see
/// [`Line::projectively_eq`].
#[derive(Debug, Clone, PartialEq)]
pub struct Line<S> {
    a: S,
    b: S,
    c: S,
}

impl<S: Scalar> Line<S> {
    pub fn new(a: S, b: S, c: S) -> Result<Self, GeomError> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(GeomError::ZeroLine);
        }
        let s = S::line_scale(&a, &b, &c);
        Ok(Line {
            a: a / s.clone(),
            b: b / s.clone(),
            c: c / s,
        })
    }

    /// The line `⟨normal, X⟩ = offset`.
    pub fn from_normal(normal: &Point<S>, offset: S) -> Result<Self, GeomError> {
        Line::new(normal.x.clone(), normal.y.clone(), -offset)
    }

    pub fn at_infinity() -> Self {
        Line {
            a: S::zero(),
            b: S::zero(),
            c: S::one(),
        }
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn coeffs(&self) -> [&S; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn is_at_infinity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn normal(&self) -> Point<S> {
        Point::new(self.a.clone(), self.b.clone())
    }

    /// `a·x + b·y + c·w`.
    pub fn incidence(&self, p: &HPoint<S>) -> S {
        self.a.clone() * p.x.clone() + self.b.clone() * p.y.clone() + self.c.clone() * p.w.clone()
    }

    /// Signed value `a·x + b·y + c` at an affine point.
    pub fn eval(&self, p: &Point<S>) -> S {
        self.a.clone() * p.x.clone() + self.b.clone() * p.y.clone() + self.c.clone()
    }

    pub fn reversed(&self) -> Line<S> {
        Line {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
        }
    }

    pub fn contains(&self, p: &HPoint<S>) -> bool {
        if S::is_exact() {
            self.incidence(p).is_zero()
        } else {
            incidence_residual(self, p) <= S::tolerance()
        }
    }

    pub fn to_f64(&self) -> Line<f64> {
        Line::new(self.a.to_float(), self.b.to_float(), self.c.to_float())
            .unwrap_or_else(|_| Line::at_infinity())
    }

    /// Coefficients scaled to `a² + b² = 1` (`|c| = 1` at infinity).
    pub fn normalized(&self) -> [f64; 3] {
        let l = self.to_f64();
        [l.a, l.b, l.c]
    }

    pub fn projectively_eq(&self, other: &Line<S>) -> bool {
        let p = |u: &S, v: &S, s: &S, t: &S| u.clone() * t.clone() == s.clone() * v.clone();
        p(&self.a, &self.b, &other.a, &other.b)
            && p(&self.a, &self.c, &other.a, &other.c)
            && p(&self.b, &self.c, &other.b, &other.c)
    }
}

fn det3<S: Scalar>(m: [[&S; 3]; 3]) -> S {
    let t = |i: usize, j: usize| m[i][j].clone();
    t(0, 0) * (t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1))
        - t(0, 1) * (t(1, 0) * t(2, 2) - t(1, 2) * t(2, 0))
        + t(0, 2) * (t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0))
}

/// Determinant of a 3×3 matrix given by rows.
pub fn determinant<S: Scalar>(rows: [[S; 3]; 3]) -> S {
    det3([
        [&rows[0][0], &rows[0][1], &rows[0][2]],
        [&rows[1][0], &rows[1][1], &rows[1][2]],
        [&rows[2][0], &rows[2][1], &rows[2][2]],
    ])
}

/// Homogeneous orientation determinant of three points. Zero iff collinear
/// in exact mode; float callers apply their own tolerance.
pub fn orient<S: Scalar>(p: &HPoint<S>, q: &HPoint<S>, r: &HPoint<S>) -> S {
    det3([p.coords(), q.coords(), r.coords()])
}

fn cross3<S: Scalar>(u: [&S; 3], v: [&S; 3]) -> [S; 3] {
    [
        u[1].clone() * v[2].clone() - u[2].clone() * v[1].clone(),
        u[2].clone() * v[0].clone() - u[0].clone() * v[2].clone(),
        u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone(),
    ]
}

fn near_zero_cross<S: Scalar>(out: &[S; 3], u: [&S; 3], v: [&S; 3]) -> bool {
    if out.iter().all(|c| c.is_zero()) {
        return true;
    }
    if S::is_exact() {
        return false;
    }
    let n = |w: [f64; 3]| w.iter().map(|c| c * c).sum::<f64>().sqrt();
    let f = |w: [&S; 3]| [w[0].to_float(), w[1].to_float(), w[2].to_float()];
    let scale = n(f(u)) * n(f(v));
    let o = [out[0].to_float(), out[1].to_float(), out[2].to_float()];
    n(o) <= 1e-14 * scale
}

/// Line through two projectively distinct points.
pub fn line_through<S: Scalar>(p: &HPoint<S>, q: &HPoint<S>) -> Result<Line<S>, GeomError> {
    let [a, b, c] = cross3(p.coords(), q.coords());
    if near_zero_cross(&[a.clone(), b.clone(), c.clone()], p.coords(), q.coords()) {
        return Err(GeomError::CoincidentPoints);
    }
    Line::new(a, b, c)
}

/// Intersection point of two distinct lines; at infinity when parallel.
pub fn intersect<S: Scalar>(l1: &Line<S>, l2: &Line<S>) -> Result<HPoint<S>, GeomError> {
    let [x, y, w] = cross3(l1.coeffs(), l2.coeffs());
    if near_zero_cross(&[x.clone(), y.clone(), w.clone()], l1.coeffs(), l2.coeffs()) {
        return Err(GeomError::IdenticalLines);
    }
    // Canonical sign: prefer w > 0, keeps affine results readable.
    let flip = w < S::zero() || (w.is_zero() && (x < S::zero() || (x.is_zero() && y < S::zero())));
    Ok(if flip {
        HPoint {
            x: -x,
            y: -y,
            w: -w,
        }
    } else {
        HPoint { x, y, w }
    })
}

/// Collinearity residual: `|orient|` of the three points after each is
/// scaled to unit max-norm. Exactly zero in exact mode iff collinear.
pub fn collinearity_residual<S: Scalar>(p: &HPoint<S>, q: &HPoint<S>, r: &HPoint<S>) -> f64 {
    if S::is_exact() && orient(p, q, r).is_zero() {
        return 0.0;
    }
    let (u, v, w) = (p.normalized(), q.normalized(), r.normalized());
    let d = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0]);
    d.abs()
}

/// `|a·x + b·y + c·w|` with the line at unit normal and the point at unit
/// max-norm.
pub fn incidence_residual<S: Scalar>(l: &Line<S>, p: &HPoint<S>) -> f64 {
    if S::is_exact() && l.incidence(p).is_zero() {
        return 0.0;
    }
    let n = l.normalized();
    let q = p.normalized();
    (n[0] * q[0] + n[1] * q[1] + n[2] * q[2]).abs()
}

/// Distance between two projective points on the unit sphere, modulo sign.
pub fn projective_distance<S: Scalar>(p: &HPoint<S>, q: &HPoint<S>) -> f64 {
    if S::is_exact() && p.projectively_eq(q) {
        return 0.0;
    }
    let unit = |h: &HPoint<S>| {
        let v = [h.x.to_float(), h.y.to_float(), h.w.to_float()];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    let (u, v) = (unit(p), unit(q));
    let plus = ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2) + (u[2] - v[2]).powi(2)).sqrt();
    let minus = ((u[0] + v[0]).powi(2) + (u[1] + v[1]).powi(2) + (u[2] + v[2]).powi(2)).sqrt();
    plus.min(minus)
}

/// Distance between normalized line coefficient vectors, modulo sign.
pub fn line_distance<S: Scalar>(l1: &Line<S>, l2: &Line<S>) -> f64 {
    if S::is_exact() && l1.projectively_eq(l2) {
        return 0.0;
    }
    let (u, v) = (l1.normalized(), l2.normalized());
    let d = |s: f64| {
        ((u[0] - s * v[0]).powi(2) + (u[1] - s * v[1]).powi(2) + (u[2] - s * v[2]).powi(2)).sqrt()
    };
    d(1.0).min(d(-1.0))
}
