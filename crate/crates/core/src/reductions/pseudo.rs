use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Rational, Vector};
use crate::orbit::Lds;

/// How perturbations are chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Steering {
    None,
    TowardPoint {
        #[serde(with = "crate::kernel::serde_rational::vec")]
        target: Vector,
    },
}

/// `x_{n+1} = M x_n + d_n` with max-norm `|d_n| < epsilon`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoTrajectory {
    #[serde(with = "crate::kernel::serde_rational")]
    pub epsilon: Rational,
    #[serde(with = "crate::kernel::serde_rational::vec_vec")]
    pub points: Vec<Vector>,
    #[serde(with = "crate::kernel::serde_rational::vec_vec")]
    pub perturbations: Vec<Vector>,
}

pub fn max_norm(v: &[Rational]) -> Rational {
    v.iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rational::zero)
}

impl PseudoTrajectory {
    /// Exact check that this is an `epsilon`-pseudo-orbit of `lds`.
    pub fn is_valid(&self, lds: &Lds, epsilon: &Rational) -> bool {
        if self.points.len() != self.perturbations.len() + 1
            || self.points.first().map(Vec::as_slice) != Some(lds.start())
        {
            return false;
        }
        self.perturbations.iter().enumerate().all(|(n, d)| {
            d.len() == lds.dim()
                && max_norm(d) < *epsilon
                && lds
                    .step(&self.points[n])
                    .iter()
                    .zip(d)
                    .map(|(m, e)| m + e)
                    .eq(self.points[n + 1].iter().cloned())
        })
    }

    /// First index whose point equals `y`.
    pub fn first_visit(&self, y: &[Rational]) -> Option<usize> {
        self.points.iter().position(|p| p.as_slice() == y)
    }
}

/// Greedy choice: the exact offset where it fits strictly inside the ball,
/// otherwise `epsilon / 2` in its direction.
fn clamp(delta: &Rational, epsilon: &Rational) -> Rational {
    if delta.abs() < *epsilon {
        delta.clone()
    } else {
        epsilon / Rational::from_integer(2.into()) * delta.signum()
    }
}

pub fn pseudo_orbit(
    lds: &Lds,
    epsilon: &Rational,
    steps: usize,
    steering: &Steering,
) -> Result<PseudoTrajectory> {
    if !epsilon.is_positive() {
        return Err(Error::Domain(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    if let Steering::TowardPoint { target } = steering {
        if target.len() != lds.dim() {
            return Err(Error::Shape(format!(
                "target has length {}, system dimension is {}",
                target.len(),
                lds.dim()
            )));
        }
    }
    let mut points = vec![lds.start().to_vec()];
    let mut perturbations = Vec::with_capacity(steps);
    for _ in 0..steps {
        let image = lds.step(points.last().expect("nonempty"));
        let d: Vector = match steering {
            Steering::None => vec![Rational::zero(); lds.dim()],
            Steering::TowardPoint { target } => target
                .iter()
                .zip(&image)
                .map(|(t, m)| clamp(&(t - m), epsilon))
                .collect(),
        };
        points.push(image.iter().zip(&d).map(|(m, e)| m + e).collect());
        perturbations.push(d);
    }
    Ok(PseudoTrajectory {
        epsilon: epsilon.clone(),
        points,
        perturbations,
    })
}
