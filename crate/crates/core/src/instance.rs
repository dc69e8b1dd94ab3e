//! JSON instance files: a metric, a scalar mode and two or three circles.
//!
//! ```json
//! {"metric": "alpha-k:3/2", "scalar_mode": "exact",
//!  "circles": [{"cx": "0", "cy": "0", "r": "1"}, {"cx": 6, "cy": 0, "r": 2}]}
//! ```

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circles::{Circle, CircleError};
use crate::geom::{ParseScalarError, Point, Scalar, ScalarMode};
use crate::metrics::{Metric, MetricError};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read instance: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("bad coordinate: {0}")]
    Scalar(#[from] ParseScalarError),
    #[error(transparent)]
    Circle(#[from] CircleError),
    #[error("expected {expected} circles, found {found}")]
    CircleCount { expected: usize, found: usize },
}

/// A coordinate as written: a JSON number or a string such as `"3/2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coord {
    Number(serde_json::Number),
    Text(String),
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Number(n) => write!(f, "{n}"),
            Coord::Text(s) => f.write_str(s),
        }
    }
}

impl Coord {
    /// Numbers are re-read from their shortest decimal text, so `0.1` is
    /// exactly one tenth in exact mode.
    pub fn parse<S: Scalar>(&self) -> Result<S, ParseScalarError> {
        S::parse_text(&self.to_string())
    }

    pub fn from_scalar<S: Scalar>(s: &S) -> Coord {
        match s.to_json() {
            serde_json::Value::Number(n) => Coord::Number(n),
            other => Coord::Text(
                other
                    .as_str()
                    .map(str::to_string)
                    .unwrap_or_else(|| other.to_string()),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSpec {
    pub cx: Coord,
    pub cy: Coord,
    pub r: Coord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub metric: String,
    /// Defaults to exact for rational metrics and float otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_mode: Option<ScalarMode>,
    pub circles: Vec<CircleSpec>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, InstanceError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_circles<S: Scalar>(circles: &[Circle<S>]) -> Self {
        let metric = circles
            .first()
            .map(|c| c.metric().to_string())
            .unwrap_or_else(|| "euclidean".to_string());
        InstanceFile {
            metric,
            scalar_mode: Some(S::MODE),
            circles: circles
                .iter()
                .map(|c| CircleSpec {
                    cx: Coord::from_scalar(&c.center().x),
                    cy: Coord::from_scalar(&c.center().y),
                    r: Coord::from_scalar(c.radius()),
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    /// Mode after applying a command-line override; exact mode is refused
    /// for irrational metrics.
    pub fn mode(&self, overridden: Option<ScalarMode>) -> Result<ScalarMode, InstanceError> {
        let rational = Metric::<f64>::parse(&self.metric)?.is_rational();
        let mode = overridden.or(self.scalar_mode).unwrap_or(if rational {
            ScalarMode::Exact
        } else {
            ScalarMode::Float
        });
        if mode == ScalarMode::Exact && !rational {
            return Err(MetricError::NotExact(self.metric.clone()).into());
        }
        Ok(mode)
    }

    pub fn circles<S: Scalar>(&self, expected: usize) -> Result<Vec<Circle<S>>, InstanceError> {
        if self.circles.len() != expected {
            return Err(InstanceError::CircleCount {
                expected,
                found: self.circles.len(),
            });
        }
        let metric = Metric::<S>::parse(&self.metric)?;
        self.circles
            .iter()
            .map(|c| {
                let center = Point::new(c.cx.parse()?, c.cy.parse()?);
                Ok(Circle::new(center, c.r.parse()?, metric.clone())?)
            })
            .collect()
    }
}
