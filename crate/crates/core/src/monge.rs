//! Monge points and the Monge line of three circles, and a report that
//! checks collinearity along two independent routes.
//!
//! The closed-form homothety centers are collinear by an algebraic identity,
//! so the report keeps them apart from the apexes obtained by intersecting
//! constructed tangent lines. Only the latter test the tangent geometry.

use serde_json::{json, Value};
use thiserror::Error;

use crate::circles::Circle;
use crate::geom::{
    collinearity_residual, determinant, format_sig, incidence_residual, line_through,
    projective_distance, HPoint, Line, Scalar,
};
use crate::metrics::{distance, MetricError};
use crate::tangents::{external_tangents, homothety_center, TangentError, TangentPair};

/// Index pairs in report order: `P_12`, `P_13`, `P_23`.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MongeError {
    #[error("circles use different metrics")]
    MetricMismatch,
    #[error("Monge line is undetermined: all three determinant coefficients vanish")]
    Degenerate,
    #[error(transparent)]
    Tangent(#[from] TangentError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn check_metrics<S: Scalar>(circles: [&Circle<S>; 3]) -> Result<(), MongeError> {
    if circles[0].metric() != circles[1].metric() || circles[0].metric() != circles[2].metric() {
        return Err(MongeError::MetricMismatch);
    }
    Ok(())
}

fn closed_points<S: Scalar>(circles: [&Circle<S>; 3]) -> Result<[HPoint<S>; 3], MongeError> {
    check_metrics(circles)?;
    let p = |(i, j): (usize, usize)| homothety_center(circles[i], circles[j]);
    Ok([p(PAIRS[0])?, p(PAIRS[1])?, p(PAIRS[2])?])
}

/// `(P_12, P_13, P_23)` from the closed-form homothety centers.
pub fn monge_points<S: Scalar>(
    c1: &Circle<S>,
    c2: &Circle<S>,
    c3: &Circle<S>,
) -> Result<[HPoint<S>; 3], MongeError> {
    closed_points([c1, c2, c3])
}

/// The three determinants of the Monge line equation `D_x·y = D_y·x − D_xyr`.
#[derive(Debug, Clone, PartialEq)]
pub struct MongeCoefficients<S> {
    pub d_x: S,
    pub d_y: S,
    pub d_xyr: S,
}

impl<S: Scalar> MongeCoefficients<S> {
    pub fn new(c1: &Circle<S>, c2: &Circle<S>, c3: &Circle<S>) -> Result<Self, MongeError> {
        check_metrics([c1, c2, c3])?;
        let cs = [c1, c2, c3];
        let row = |f: &dyn Fn(&Circle<S>) -> S| [f(cs[0]), f(cs[1]), f(cs[2])];
        let xs = row(&|c| c.center().x.clone());
        let ys = row(&|c| c.center().y.clone());
        let rs = row(&|c| c.radius().clone());
        let ones = [S::one(), S::one(), S::one()];
        Ok(MongeCoefficients {
            d_x: determinant([xs.clone(), rs.clone(), ones.clone()]),
            d_y: determinant([ys.clone(), rs.clone(), ones]),
            d_xyr: determinant([xs, ys, rs]),
        })
    }

    /// `(D_y, −D_x, −D_xyr)`; the line at infinity when `D_x = D_y = 0`.
    pub fn line(&self) -> Result<Line<S>, MongeError> {
        Line::new(self.d_y.clone(), -self.d_x.clone(), -self.d_xyr.clone())
            .map_err(|_| MongeError::Degenerate)
    }
}

/// Monge line from the determinant equation.
pub fn monge_line<S: Scalar>(
    c1: &Circle<S>,
    c2: &Circle<S>,
    c3: &Circle<S>,
) -> Result<Line<S>, MongeError> {
    MongeCoefficients::new(c1, c2, c3)?.line()
}

/// Pairwise preconditions of the theorem.
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub non_overlap: bool,
    pub no_containment: bool,
    pub distinct_radii: bool,
    /// `overlap(i,j)`, `containment(i,j)`, `equal_radii(i,j)` with 1-based
    /// indices.
    pub reasons: Vec<String>,
}

impl Admissibility {
    /// Equal radii are handled projectively and do not make a configuration
    /// inadmissible.
    pub fn is_admissible(&self) -> bool {
        self.non_overlap && self.no_containment
    }
}

/// Checks every pair in its own metric.
pub fn admissibility<S: Scalar>(circles: [&Circle<S>; 3]) -> Result<Admissibility, MongeError> {
    check_metrics(circles)?;
    let mut adm = Admissibility {
        non_overlap: true,
        no_containment: true,
        distinct_radii: true,
        reasons: Vec::new(),
    };
    for (i, j) in PAIRS {
        let (ci, cj) = (circles[i], circles[j]);
        let d = distance(ci.metric(), ci.center(), cj.center())?;
        let (ri, rj) = (ci.radius().clone(), cj.radius().clone());
        let scale = d.to_float().abs() + ri.to_float() + rj.to_float();
        let tag = |what: &str| format!("{what}({},{})", i + 1, j + 1);
        if d.cmp_tol(&(ri.clone() + rj.clone()), scale).is_le() {
            adm.non_overlap = false;
            adm.reasons.push(tag("overlap"));
        }
        if d.cmp_tol(&(ri.clone() - rj.clone()).abs(), scale).is_le() {
            adm.no_containment = false;
            adm.reasons.push(tag("containment"));
        }
        if ri == rj {
            adm.distinct_radii = false;
            adm.reasons.push(tag("equal_radii"));
        }
    }
    Ok(adm)
}

/// Residuals of both routes. Float measures use unit-normalized homogeneous
/// coordinates; in exact mode each is exactly zero or the float measure of
/// a nonzero exact value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Residuals {
    /// Orientation of the closed-form points (an identity).
    pub collinearity_closed: f64,
    /// Orientation of the tangent-derived points.
    pub collinearity_tangent: Option<f64>,
    /// Projective distance between tangent-derived and closed-form apexes.
    pub apex_discrepancy: [Option<f64>; 3],
    pub line_incidence_closed: [Option<f64>; 3],
    pub line_incidence_tangent: [Option<f64>; 3],
    /// Incidence of `P_ij` with the line through `M_i` and `M_j`.
    pub center_line_incidence: [Option<f64>; 3],
    /// For a Monge point at infinity: incidence of that direction with the
    /// line through the two other (finite) points.
    pub infinite_direction: [Option<f64>; 3],
}

impl Residuals {
    pub fn max(&self) -> f64 {
        let mut all = vec![self.collinearity_closed];
        all.extend(self.collinearity_tangent);
        for group in [
            &self.apex_discrepancy,
            &self.line_incidence_closed,
            &self.line_incidence_tangent,
            &self.center_line_incidence,
            &self.infinite_direction,
        ] {
            all.extend(group.iter().flatten());
        }
        all.into_iter().fold(0.0, f64::max)
    }
}

/// Everything computed by [`verify_monge`].
#[derive(Debug, Clone)]
pub struct MongeReport<S> {
    pub circles: [Circle<S>; 3],
    pub apexes_closed: [HPoint<S>; 3],
    pub apexes_tangent: [Option<HPoint<S>>; 3],
    pub tangents: [Option<TangentPair<S>>; 3],
    pub coefficients: MongeCoefficients<S>,
    pub monge_line: Option<Line<S>>,
    pub residuals: Residuals,
    pub admissible: Admissibility,
    /// Construction failures and degenerate cases.
    pub notes: Vec<String>,
    pub passed: bool,
}

/// Runs the closed-form and tangent-construction routes and compares them.
///
/// Only a metric mismatch is an error. Inadmissible configurations are
/// reported with reasons and never pass; tangent construction failures on
/// admissible input are recorded as failures.
pub fn verify_monge<S: Scalar>(
    c1: &Circle<S>,
    c2: &Circle<S>,
    c3: &Circle<S>,
) -> Result<MongeReport<S>, MongeError> {
    let circles = [c1, c2, c3];
    let admissible = admissibility(circles)?;
    let apexes_closed = closed_points(circles)?;
    let coefficients = MongeCoefficients::new(c1, c2, c3)?;
    let mut notes = Vec::new();
    let monge_line = match coefficients.line() {
        Ok(l) => {
            if l.is_at_infinity() {
                notes.push("monge line is the line at infinity".to_string());
            }
            Some(l)
        }
        Err(_) => {
            notes.push("degenerate: Monge line undetermined".to_string());
            None
        }
    };

    let mut tangents: [Option<TangentPair<S>>; 3] = [None, None, None];
    let mut failed = false;
    if admissible.is_admissible() {
        for (k, (i, j)) in PAIRS.into_iter().enumerate() {
            match external_tangents(circles[i], circles[j]) {
                Ok(pair) => tangents[k] = Some(pair),
                Err(e) => {
                    failed = true;
                    notes.push(format!("tangents({},{}): {e}", i + 1, j + 1));
                }
            }
        }
    }
    let apexes_tangent = tangents.clone().map(|t| t.map(|p| p.apex));

    let mut r = Residuals {
        collinearity_closed: collinearity_residual(
            &apexes_closed[0],
            &apexes_closed[1],
            &apexes_closed[2],
        ),
        ..Residuals::default()
    };
    if let [Some(a), Some(b), Some(c)] = &apexes_tangent {
        r.collinearity_tangent = Some(collinearity_residual(a, b, c));
    }
    for (k, (i, j)) in PAIRS.into_iter().enumerate() {
        let closed = &apexes_closed[k];
        if let Some(t) = &apexes_tangent[k] {
            r.apex_discrepancy[k] = Some(projective_distance(t, closed));
        }
        if let Some(l) = &monge_line {
            r.line_incidence_closed[k] = Some(incidence_residual(l, closed));
            r.line_incidence_tangent[k] =
                apexes_tangent[k].as_ref().map(|t| incidence_residual(l, t));
        }
        let (mi, mj) = (
            circles[i].center().homogeneous(),
            circles[j].center().homogeneous(),
        );
        if let Ok(center_line) = line_through(&mi, &mj) {
            r.center_line_incidence[k] = Some(incidence_residual(&center_line, closed));
        }
        if closed.is_at_infinity() {
            let others: Vec<&HPoint<S>> = (0..3)
                .filter(|&m| m != k)
                .map(|m| &apexes_closed[m])
                .collect();
            if others.iter().all(|p| !p.is_at_infinity()) {
                if let Ok(l) = line_through(others[0], others[1]) {
                    r.infinite_direction[k] = Some(incidence_residual(&l, closed));
                }
            }
        }
    }

    let tolerance = S::tolerance();
    let within = |v: f64| {
        if S::is_exact() {
            v == 0.0
        } else {
            v <= tolerance
        }
    };
    let passed = admissible.is_admissible()
        && !failed
        && r.collinearity_tangent.is_some()
        && within(r.max());

    Ok(MongeReport {
        circles: [c1.clone(), c2.clone(), c3.clone()],
        apexes_closed,
        apexes_tangent,
        tangents,
        coefficients,
        monge_line,
        residuals: r,
        admissible,
        notes,
        passed,
    })
}

/// Affine points as `{"x", "y"}`, points at infinity as
/// `{"at_infinity": true, "direction": [dx, dy]}`.
pub fn point_json<S: Scalar>(p: &HPoint<S>) -> Value {
    match p.to_affine() {
        Some(a) => json!({ "x": a.x.to_json(), "y": a.y.to_json() }),
        None => {
            let (dx, dy) = (p.x().clone(), p.y().clone());
            let m = S::max_of(dx.abs(), dy.abs());
            json!({
                "at_infinity": true,
                "direction": [(dx / m.clone()).to_json(), (dy / m).to_json()],
            })
        }
    }
}

pub fn line_json<S: Scalar>(l: &Line<S>) -> Value {
    json!({ "a": l.a().to_json(), "b": l.b().to_json(), "c": l.c().to_json() })
}

pub fn circle_json<S: Scalar>(c: &Circle<S>) -> Value {
    json!({ "cx": c.center().x.to_json(), "cy": c.center().y.to_json(), "r": c.radius().to_json() })
}

fn residual_json<S: Scalar>(v: f64) -> Value {
    if S::is_exact() {
        Value::String(format_sig(v, 17))
    } else {
        f64::to_json(&v)
    }
}

impl<S: Scalar> MongeReport<S> {
    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub fn to_json(&self) -> Value {
        let opt = |v: &Option<f64>| v.map_or(Value::Null, residual_json::<S>);
        let opts = |vs: &[Option<f64>; 3]| Value::Array(vs.iter().map(opt).collect());
        let r = &self.residuals;
        json!({
            "status": self.status(),
            "metric": self.circles[0].metric().to_string(),
            "scalar_mode": S::MODE.to_string(),
            "circles": self.circles.iter().map(circle_json).collect::<Vec<_>>(),
            "apexes_closed": self.apexes_closed.iter().map(point_json).collect::<Vec<_>>(),
            "apexes_tangent": self.apexes_tangent.iter()
                .map(|p| p.as_ref().map_or(Value::Null, point_json))
                .collect::<Vec<_>>(),
            "tangent_lines": self.tangents.iter()
                .map(|t| t.as_ref().map_or(Value::Null, |t| json!([line_json(&t.lines[0]), line_json(&t.lines[1])])))
                .collect::<Vec<_>>(),
            "monge_line": self.monge_line.as_ref().map_or(Value::Null, line_json),
            "coefficients": {
                "d_x": self.coefficients.d_x.to_json(),
                "d_y": self.coefficients.d_y.to_json(),
                "d_xyr": self.coefficients.d_xyr.to_json(),
            },
            "residuals": {
                "collinearity_closed": residual_json::<S>(r.collinearity_closed),
                "collinearity_tangent": opt(&r.collinearity_tangent),
                "apex_discrepancy": opts(&r.apex_discrepancy),
                "line_incidence_closed": opts(&r.line_incidence_closed),
                "line_incidence_tangent": opts(&r.line_incidence_tangent),
                "center_line_incidence": opts(&r.center_line_incidence),
                "infinite_direction": opts(&r.infinite_direction),
            },
            "admissible": {
                "ok": self.admissible.is_admissible(),
                "non_overlap": self.admissible.non_overlap,
                "no_containment": self.admissible.no_containment,
                "distinct_radii": self.admissible.distinct_radii,
                "reasons": self.admissible.reasons,
            },
            "notes": self.notes,
        })
    }
}
