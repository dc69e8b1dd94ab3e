//! Common external tangents of two circles of the same metric.
//!
//! For distinct radii both external tangents pass through the external
//! homothety center `P_ij = (r_i M_j − r_j M_i) / (r_i − r_j)`; for equal
//! radii they are parallel and meet at infinity. [`external_tangents`] builds
//! each tangent from a touching point on each circle, so the apex it reports
//! is an independent check of the closed form. [`oracle_tangents`] is a
//! brute-force scan over support directions.

use std::cmp::Ordering;
use std::f64::consts::PI;

use thiserror::Error;

use crate::circles::{
    Boundary, Circle, CircleError, LpCurve, Position, Touch, CURVE_SAMPLES, PARAM_TOL,
};
use crate::geom::{intersect, line_through, GeomError, HPoint, Line, Point, Scalar};
use crate::metrics::{distance, MetricError};

/// Default number of directions scanned by [`oracle_tangents`].
pub const ORACLE_DIRECTIONS: usize = 8192;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TangentError {
    #[error("circles use different metrics")]
    MetricMismatch,
    #[error("circles overlap")]
    Overlap,
    #[error("one circle contains the other")]
    Containment,
    #[error("homothety center is not exterior to both circles")]
    ApexNotExterior,
    #[error("constructed line is not a common external tangent: {0}")]
    NotTangent(String),
    #[error("oracle found {0} tangent clusters, expected 2")]
    OracleClusters(usize),
    #[error(transparent)]
    Circle(#[from] CircleError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// The two external tangents of a circle pair.
#[derive(Debug, Clone)]
pub struct TangentPair<S> {
    /// Oriented so that both circles lie in `a·x + b·y + c ≤ 0`.
    pub lines: [Line<S>; 2],
    pub touch_i: [Touch<S>; 2],
    pub touch_j: [Touch<S>; 2],
    /// Intersection of the two lines, possibly at infinity.
    pub apex: HPoint<S>,
}

fn same_metric<S: Scalar>(ci: &Circle<S>, cj: &Circle<S>) -> Result<(), TangentError> {
    if ci.metric() != cj.metric() {
        return Err(TangentError::MetricMismatch);
    }
    Ok(())
}

/// External homothety center `(r_i x_j − r_j x_i : r_i y_j − r_j y_i : r_i − r_j)`.
pub fn homothety_center<S: Scalar>(
    ci: &Circle<S>,
    cj: &Circle<S>,
) -> Result<HPoint<S>, TangentError> {
    same_metric(ci, cj)?;
    let (mi, mj) = (ci.center(), cj.center());
    let (ri, rj) = (ci.radius().clone(), cj.radius().clone());
    Ok(HPoint::new(
        ri.clone() * mj.x.clone() - rj.clone() * mi.x.clone(),
        ri.clone() * mj.y.clone() - rj.clone() * mi.y.clone(),
        ri - rj,
    )?)
}

/// Why a pair cannot have two external tangents, if it cannot. Containment
/// takes precedence over overlap. Distances are measured in the circles'
/// own metric.
pub fn pair_admissibility<S: Scalar>(ci: &Circle<S>, cj: &Circle<S>) -> Result<(), TangentError> {
    same_metric(ci, cj)?;
    let d = distance(ci.metric(), ci.center(), cj.center())?;
    let (ri, rj) = (ci.radius().clone(), cj.radius().clone());
    let scale = d.to_float().abs() + ri.to_float() + rj.to_float();
    if d.cmp_tol(&(ri.clone() - rj.clone()).abs(), scale) != Ordering::Greater {
        return Err(TangentError::Containment);
    }
    if d.cmp_tol(&(ri + rj), scale) != Ordering::Greater {
        return Err(TangentError::Overlap);
    }
    Ok(())
}

/// Which closed side of `l` a circle lies on: `Some(Less)` for
/// `a·x + b·y + c ≤ 0`, `Some(Greater)` for `≥ 0`, `None` if `l` does not
/// support it.
fn supported_side<S: Scalar>(l: &Line<S>, c: &Circle<S>) -> Result<Option<Ordering>, CircleError> {
    let n = l.normal();
    let target = -l.c().clone();
    let scale =
        l.c().to_float().abs() + n.max_abs() * (c.center().max_abs() + c.radius().to_float().abs());
    let upper = c.support_value(&n)?;
    if upper.cmp_tol(&target, scale) == Ordering::Equal {
        return Ok(Some(Ordering::Less));
    }
    let lower = -c.support_value(&Point::new(-n.x.clone(), -n.y.clone()))?;
    if lower.cmp_tol(&target, scale) == Ordering::Equal {
        return Ok(Some(Ordering::Greater));
    }
    Ok(None)
}

/// True iff `l` supports both circles with both on the same closed side,
/// so it does not pass between them.
pub fn is_external_tangent<S: Scalar>(l: &Line<S>, ci: &Circle<S>, cj: &Circle<S>) -> bool {
    if l.is_at_infinity() {
        return false;
    }
    let (side_i, side_j) = match (supported_side(l, ci), supported_side(l, cj)) {
        (Ok(Some(a)), Ok(Some(b))) => (a, b),
        _ => return false,
    };
    if side_i != side_j {
        return false;
    }
    let (ei, ej) = (l.eval(ci.center()), l.eval(cj.center()));
    let opposite = (ei > S::zero() && ej < S::zero()) || (ei < S::zero() && ej > S::zero());
    !opposite
}

/// Outward normal of the line through `apex` and boundary point `touch`:
/// the circle center ends up on the negative side.
fn outward_normal<S: Scalar>(apex: &Point<S>, touch: &Point<S>, center: &Point<S>) -> Point<S> {
    let n = touch.sub(apex).perp();
    if n.dot(&center.sub(touch)) > S::zero() {
        Point::new(-n.x, -n.y)
    } else {
        n
    }
}

/// Tangent points on a polygon seen from an exterior point: the most
/// counterclockwise and most clockwise vertices.
fn polygon_tangent_vertices<S: Scalar>(
    vertices: &[Point<S>],
    apex: &Point<S>,
) -> [(usize, Point<S>); 2] {
    let extreme = |want: Ordering| {
        let mut best = 0;
        for i in 1..vertices.len() {
            let turn = vertices[best].sub(apex).cross(&vertices[i].sub(apex));
            if turn.partial_cmp(&S::zero()) == Some(want) {
                best = i;
            }
        }
        (best, vertices[best].clone())
    };
    [extreme(Ordering::Greater), extreme(Ordering::Less)]
}

/// Parameters of the two tangent points of a smooth curve seen from an
/// exterior point: roots of `cross(X'(t), P − X(t))`, bracketed on a
/// [`CURVE_SAMPLES`] grid and bisected to [`PARAM_TOL`].
pub fn curve_tangent_params(curve: &LpCurve, apex: &Point<f64>) -> Result<[f64; 2], TangentError> {
    let f = |t: f64| {
        let x = curve.point(t);
        curve.tangent_dir(t).cross(&apex.sub(&x))
    };
    let n = CURVE_SAMPLES;
    let values: Vec<f64> = (0..n).map(|i| f(LpCurve::param(i, n))).collect();
    let mut rising = Vec::new();
    let mut falling = Vec::new();
    for i in 0..n {
        let (a, b) = (values[i], values[(i + 1) % n]);
        let lo = LpCurve::param(i, n);
        let hi = lo + 2.0 * PI / n as f64;
        let root = if a == 0.0 {
            lo
        } else if a * b < 0.0 {
            let (mut l, mut h) = (lo, hi);
            while h - l > PARAM_TOL {
                let m = 0.5 * (l + h);
                if (f(m) < 0.0) == (a < 0.0) {
                    l = m;
                } else {
                    h = m;
                }
            }
            0.5 * (l + h)
        } else {
            continue;
        };
        if a < 0.0 || (a == 0.0 && b > 0.0) {
            rising.push(root);
        } else {
            falling.push(root);
        }
    }
    match (rising.as_slice(), falling.as_slice()) {
        ([r], [f]) => Ok([*r, *f]),
        _ => Err(TangentError::NotTangent(format!(
            "expected two tangent points from apex, found {}",
            rising.len() + falling.len()
        ))),
    }
}

fn to_scalar_point<S: Scalar>(p: &Point<f64>) -> Point<S> {
    Point::new(
        S::from_float(p.x).expect("finite coordinate"),
        S::from_float(p.y).expect("finite coordinate"),
    )
}

/// The touching point of `cj`'s support set in direction `n` that is
/// farthest from `from`.
fn far_touch_point<S: Scalar>(touch: &Touch<S>, from: &Point<S>) -> Point<S> {
    touch
        .points()
        .into_iter()
        .max_by(|a, b| {
            let da = a.sub(from).to_f64().norm();
            let db = b.sub(from).to_f64().norm();
            da.total_cmp(&db)
        })
        .expect("touch has a point")
        .clone()
}

/// Both external tangents of an admissible pair.
///
/// Distinct radii: the extreme support lines of `ci` through the homothety
/// center locate touching points `A` on `ci`; the support point `F` of `cj`
/// with the same outward normal completes each tangent `AF`. Equal radii:
/// `A` and `F` are the support points with normal perpendicular to
/// `M_j − M_i`. Every line is checked with [`is_external_tangent`].
pub fn external_tangents<S: Scalar>(
    ci: &Circle<S>,
    cj: &Circle<S>,
) -> Result<TangentPair<S>, TangentError> {
    pair_admissibility(ci, cj)?;
    let center_i = ci.center();

    let mut normals = Vec::with_capacity(2);
    let mut touch_i = Vec::with_capacity(2);
    if ci.radius() != cj.radius() {
        let apex = homothety_center(ci, cj)?
            .to_affine()
            .expect("distinct radii give an affine apex");
        if ci.classify(&apex)? != Position::Outside || cj.classify(&apex)? != Position::Outside {
            return Err(TangentError::ApexNotExterior);
        }
        match ci.boundary() {
            Boundary::Polygon(poly) => {
                for (index, point) in polygon_tangent_vertices(poly.vertices(), &apex) {
                    normals.push(outward_normal(&apex, &point, center_i));
                    touch_i.push(Touch::Vertex { index, point });
                }
            }
            Boundary::Curve(curve) => {
                let apex_f = apex.to_f64();
                for t in curve_tangent_params(&curve, &apex_f)? {
                    let point: Point<S> = to_scalar_point(&curve.point(t));
                    normals.push(outward_normal(&apex, &point, center_i));
                    touch_i.push(Touch::Param { t, point });
                }
            }
        }
    } else {
        let d = cj.center().sub(center_i).perp();
        for n in [d.clone(), Point::new(-d.x, -d.y)] {
            touch_i.push(ci.support_line(&n)?.touch);
            normals.push(n);
        }
    }

    let mut lines = Vec::with_capacity(2);
    let mut touch_j = Vec::with_capacity(2);
    for (n, ti) in normals.iter().zip(&touch_i) {
        let tj = cj.support_line(n)?.touch;
        let a = ti.point().clone();
        let f = far_touch_point(&tj, &a);
        let mut line = line_through(&a.homogeneous(), &f.homogeneous())?;
        if line.eval(center_i) > S::zero() {
            line = line.reversed();
        }
        if !is_external_tangent(&line, ci, cj) {
            return Err(TangentError::NotTangent(format!(
                "line {:?} fails the support check",
                line.normalized()
            )));
        }
        lines.push(line);
        touch_j.push(tj);
    }

    let apex = intersect(&lines[0], &lines[1])?;
    Ok(TangentPair {
        lines: to_pair(lines),
        touch_i: to_pair(touch_i),
        touch_j: to_pair(touch_j),
        apex,
    })
}

/// Brute-force external tangents in float arithmetic.
///
/// Scans `n_dirs` unit normals `u`; a common external tangent has
/// `h_i(u) = h_j(u)` for the support functions of both circles. Sign changes
/// of `h_j − h_i` are refined by bisection on the angle until the support
/// gap is below 1e-10, and roots closer than 1e-8 rad are merged. Anything
/// other than two clusters is an error.
pub fn oracle_tangents<S: Scalar>(
    ci: &Circle<S>,
    cj: &Circle<S>,
    n_dirs: usize,
) -> Result<[Line<f64>; 2], TangentError> {
    pair_admissibility(ci, cj)?;
    let (ci, cj) = (ci.to_f64(), cj.to_f64());
    let dir = |theta: f64| Point::new(theta.cos(), theta.sin());
    let gap = |theta: f64| -> Result<f64, CircleError> {
        let u = dir(theta);
        Ok(cj.support_value(&u)? - ci.support_value(&u)?)
    };
    let scale = 1.0 + ci.center().max_abs() + cj.center().max_abs() + ci.radius() + cj.radius();
    let step = 2.0 * PI / n_dirs as f64;
    let values = (0..n_dirs)
        .map(|k| gap(k as f64 * step))
        .collect::<Result<Vec<_>, _>>()?;

    let mut roots: Vec<f64> = Vec::new();
    for k in 0..n_dirs {
        let (a, b) = (values[k], values[(k + 1) % n_dirs]);
        if a != 0.0 && a * b >= 0.0 {
            continue;
        }
        let (mut lo, mut hi) = (k as f64 * step, (k + 1) as f64 * step);
        let mut theta = lo;
        if a != 0.0 {
            for _ in 0..200 {
                theta = 0.5 * (lo + hi);
                let g = gap(theta)?;
                if g.abs() < 1e-10 * scale || hi - lo < 1e-16 {
                    break;
                }
                if (g < 0.0) == (a < 0.0) {
                    lo = theta;
                } else {
                    hi = theta;
                }
            }
        }
        if gap(theta)?.abs() >= 1e-6 * scale {
            continue;
        }
        let theta = theta.rem_euclid(2.0 * PI);
        let close = |r: &f64| {
            let d = (r - theta).abs();
            d.min(2.0 * PI - d) < 1e-8
        };
        if !roots.iter().any(close) {
            roots.push(theta);
        }
    }
    if roots.len() != 2 {
        return Err(TangentError::OracleClusters(roots.len()));
    }
    let line = |theta: f64| -> Result<Line<f64>, TangentError> {
        let u = dir(theta);
        let h = ci.support_value(&u)?;
        Ok(Line::from_normal(&u, h)?)
    };
    Ok([line(roots[0])?, line(roots[1])?])
}

fn to_pair<T>(v: Vec<T>) -> [T; 2] {
    match <[T; 2]>::try_from(v) {
        Ok(pair) => pair,
        Err(_) => unreachable!("exactly two entries"),
    }
}
