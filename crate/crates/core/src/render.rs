//! SVG 1.1 output for unit-circle galleries and Monge configurations.

use std::fmt::Write as _;

use thiserror::Error;

use crate::circles::{Boundary, Circle};
use crate::geom::{Line, Point, Scalar};
use crate::metrics::{Exponent, Metric};
use crate::monge::MongeReport;

/// Points per rendered curve.
pub const RENDER_SAMPLES: usize = 512;

/// Width of the SVG canvas in user units.
pub const CANVAS_WIDTH: f64 = 800.0;

const MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("scene has no finite drawables")]
    Empty,
    #[error("scene contains a non-finite coordinate")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Closed path through the given points.
    Closed(Vec<Point<f64>>),
    Segment(Point<f64>, Point<f64>),
    /// Clipped to the viewport when rendered.
    InfiniteLine(Line<f64>),
    Marker {
        at: Point<f64>,
        label: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Drawable {
    pub shape: Shape,
    /// SVG `class` attribute; also selects the stroke colour.
    pub class: String,
}

impl Drawable {
    pub fn new(shape: Shape, class: &str) -> Self {
        Drawable {
            shape,
            class: class.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub drawables: Vec<Drawable>,
}

/// Axis-aligned rectangle in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: (f64, f64),
    pub max: (f64, f64),
}

impl Rect {
    pub fn width(&self) -> f64 {
        self.max.0 - self.min.0
    }

    pub fn height(&self) -> f64 {
        self.max.1 - self.min.1
    }
}

impl Scene {
    pub fn push(&mut self, shape: Shape, class: &str) {
        self.drawables.push(Drawable::new(shape, class));
    }

    /// Bounding box of all finite drawables plus a 5% margin.
    pub fn viewport(&self) -> Result<Rect, RenderError> {
        let mut pts: Vec<&Point<f64>> = Vec::new();
        for d in &self.drawables {
            match &d.shape {
                Shape::Closed(ps) => pts.extend(ps),
                Shape::Segment(a, b) => pts.extend([a, b]),
                Shape::Marker { at, .. } => pts.push(at),
                Shape::InfiniteLine(_) => {}
            }
        }
        if pts.is_empty() {
            return Err(RenderError::Empty);
        }
        if pts.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(RenderError::NonFinite);
        }
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for p in pts {
            lo = (lo.0.min(p.x), lo.1.min(p.y));
            hi = (hi.0.max(p.x), hi.1.max(p.y));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        let m = MARGIN * span;
        Ok(Rect {
            min: (lo.0 - m, lo.1 - m),
            max: (hi.0 + m, hi.1 + m),
        })
    }
}

/// Portion of `a·x + b·y + c = 0` inside `rect`, as its two boundary
/// endpoints.
pub fn clip_line(line: &Line<f64>, rect: &Rect) -> Option<(Point<f64>, Point<f64>)> {
    let (a, b, c) = (*line.a(), *line.b(), *line.c());
    let inside = |v: f64, lo: f64, hi: f64| {
        v >= lo - 1e-12 * (1.0 + lo.abs()) && v <= hi + 1e-12 * (1.0 + hi.abs())
    };
    let mut hits: Vec<Point<f64>> = Vec::new();
    if b != 0.0 {
        for x in [rect.min.0, rect.max.0] {
            let y = -(a * x + c) / b;
            if inside(y, rect.min.1, rect.max.1) {
                hits.push(Point::new(x, y.clamp(rect.min.1, rect.max.1)));
            }
        }
    }
    if a != 0.0 {
        for y in [rect.min.1, rect.max.1] {
            let x = -(b * y + c) / a;
            if inside(x, rect.min.0, rect.max.0) {
                hits.push(Point::new(x.clamp(rect.min.0, rect.max.0), y));
            }
        }
    }
    let mut best: Option<(Point<f64>, Point<f64>, f64)> = None;
    for i in 0..hits.len() {
        for j in i + 1..hits.len() {
            let d = hits[i].sub(&hits[j]).norm();
            if best.as_ref().is_none_or(|b| d > b.2) {
                best = Some((hits[i].clone(), hits[j].clone(), d));
            }
        }
    }
    best.filter(|b| b.2 > 0.0).map(|(p, q, _)| (p, q))
}

fn stroke(class: &str) -> &'static str {
    match class {
        "circle" => "#1f4e9c",
        "tangent" => "#888888",
        "monge-line" => "#c0392b",
        "monge-point" => "#c0392b",
        _ => "#000000",
    }
}

/// Deterministic SVG text with the y axis pointing up.
pub fn render_scene(scene: &Scene) -> Result<String, RenderError> {
    let view = scene.viewport()?;
    let scale = CANVAS_WIDTH / view.width();
    let height = view.height() * scale;
    let map = |p: &Point<f64>| ((p.x - view.min.0) * scale, (view.max.1 - p.y) * scale);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS_WIDTH:.0}\" height=\"{height:.3}\" viewBox=\"0 0 {CANVAS_WIDTH:.0} {height:.3}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{CANVAS_WIDTH:.0}\" height=\"{height:.3}\" fill=\"white\"/>"
    );
    for d in &scene.drawables {
        let color = stroke(&d.class);
        match &d.shape {
            Shape::Closed(points) => {
                let mut path = String::new();
                for (i, p) in points.iter().enumerate() {
                    let (x, y) = map(p);
                    let _ = write!(path, "{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" });
                }
                path.push('Z');
                let _ = writeln!(
                    out,
                    "<path class=\"{}\" d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                    d.class
                );
            }
            Shape::Segment(a, b) => {
                let ((x1, y1), (x2, y2)) = (map(a), map(b));
                let _ = writeln!(
                    out,
                    "<line class=\"{}\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"{color}\" stroke-width=\"1\"/>",
                    d.class
                );
            }
            Shape::InfiniteLine(line) => {
                if let Some((a, b)) = clip_line(line, &view) {
                    let ((x1, y1), (x2, y2)) = (map(&a), map(&b));
                    let _ = writeln!(
                        out,
                        "<line class=\"{}\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"{color}\" stroke-width=\"1.5\" stroke-dasharray=\"6 3\"/>",
                        d.class
                    );
                }
            }
            Shape::Marker { at, label } => {
                let (x, y) = map(at);
                let _ = writeln!(
                    out,
                    "<circle class=\"{}\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"{color}\"/>",
                    d.class
                );
                if let Some(text) = label {
                    let _ = writeln!(
                        out,
                        "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
                        x + 6.0,
                        y - 6.0,
                        escape(text)
                    );
                }
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Outline of a circle: polygon corners (collinear vertices dropped) or
/// [`RENDER_SAMPLES`] curve points.
pub fn circle_outline<S: Scalar>(circle: &Circle<S>) -> Vec<Point<f64>> {
    match circle.boundary() {
        Boundary::Polygon(p) => p.corners().iter().map(Point::to_f64).collect(),
        Boundary::Curve(c) => c.sample(RENDER_SAMPLES),
    }
}

/// Unit circles of `alpha k ∈ {2, √2, 1 + 10⁻⁶}` and `L_p, p ∈ {1, 2, 3, ∞}`
/// overlaid at the origin.
pub fn gallery_scene() -> Scene {
    let mut metrics: Vec<Metric<f64>> = [2.0, std::f64::consts::SQRT_2, 1.0 + 1e-6]
        .into_iter()
        .map(|k| Metric::alpha_k(k).expect("k in (1, 2]"))
        .collect();
    metrics.extend([1.0, 2.0, 3.0].map(|p| Metric::lp(p).expect("p >= 1")));
    metrics.push(Metric::Lp(Exponent::Infinity));
    let mut scene = Scene::default();
    for m in metrics {
        let c = Circle::new(Point::origin(), 1.0, m).expect("unit circle");
        scene.push(Shape::Closed(circle_outline(&c)), "circle");
    }
    scene
}

/// Circles, tangent segments, Monge points and the Monge line of a report.
pub fn monge_scene<S: Scalar>(report: &MongeReport<S>) -> Scene {
    let mut scene = Scene::default();
    for c in &report.circles {
        scene.push(Shape::Closed(circle_outline(c)), "circle");
    }
    for (pair, apex) in report.tangents.iter().zip(&report.apexes_closed) {
        let Some(pair) = pair else { continue };
        for (ti, tj) in pair.touch_i.iter().zip(&pair.touch_j) {
            let a = ti.point().to_f64();
            let b = tj.point().to_f64();
            let segment = match apex.to_affine() {
                Some(p) => {
                    let p = p.to_f64();
                    let far = if a.sub(&p).norm() > b.sub(&p).norm() {
                        a
                    } else {
                        b
                    };
                    Shape::Segment(p, far)
                }
                None => {
                    let d = b.sub(&a);
                    Shape::Segment(a.sub(&d.scale(&0.15)), b.add(&d.scale(&0.15)))
                }
            };
            scene.push(segment, "tangent");
        }
    }
    if let Some(line) = &report.monge_line {
        if !line.is_at_infinity() {
            scene.push(Shape::InfiniteLine(line.to_f64()), "monge-line");
        }
    }
    for (apex, name) in report.apexes_closed.iter().zip(["P12", "P13", "P23"]) {
        if let Some(p) = apex.to_affine() {
            scene.push(
                Shape::Marker {
                    at: p.to_f64(),
                    label: Some(name.to_string()),
                },
                "monge-point",
            );
        }
    }
    scene
}

/// Scene with a single circle.
pub fn circle_scene<S: Scalar>(circle: &Circle<S>) -> Scene {
    let mut scene = Scene::default();
    scene.push(Shape::Closed(circle_outline(circle)), "circle");
    scene
}

/// Number of elements with the given class attribute.
pub fn count_class(svg: &str, class: &str) -> usize {
    svg.matches(&format!("class=\"{class}\"")).count()
}
