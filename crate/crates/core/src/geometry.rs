//! Hypersphere projection and the norm-preserving perturbation composition.
//!
//! Every perturbation variant produces an augmented feature of the form
//!
//! ```text
//! f = ‖h‖ · P(P(h) + λ·ε)
//! ```
//!
//! where `P(v) = v/‖v‖` projects onto the unit sphere and `ε` is a unit
//! direction supplied by the variant. The composition moves `h` along the
//! sphere of radius `‖h‖` without changing its magnitude, so `λ` has a pure
//! angular meaning: for `ε ⊥ P(h)` the deflection angle is exactly
//! `arctan(λ)`.

use thiserror::Error;

/// Norms at or below this threshold are treated as degenerate.
pub const DEGENERATE_NORM: f64 = 1e-30;

/// Tolerance on `|‖v‖ − 1|` for a vector to qualify as a unit vector.
pub const UNIT_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    /// A vector whose norm is too small to define a direction.
    #[error("degenerate vector: norm {norm:e} is at or below {limit:e}")]
    DegenerateVector { norm: f64, limit: f64 },
    /// A vector claimed to be unit-norm is not.
    #[error("not a unit vector: norm {norm} deviates from 1 by more than {tol:e}")]
    NotUnit { norm: f64, tol: f64 },
}

/// Dense feature vector in the representation space.
pub type FeatureVector = Vec<f64>;

/// A feature vector constrained to the unit hypersphere (`|‖v‖−1| ≤ 1e−12`).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    values: FeatureVector,
}

impl UnitVector {
    /// Wraps `values`, checking the unit-norm invariant.
    pub fn new(values: FeatureVector) -> Result<Self, GeometryError> {
        let n = norm(&values);
        if (n - 1.0).abs() > UNIT_NORM_TOL {
            return Err(GeometryError::NotUnit {
                norm: n,
                tol: UNIT_NORM_TOL,
            });
        }
        Ok(Self { values })
    }

    /// Normalizes `values` onto the sphere. Errors on degenerate input.
    pub fn project(values: &[f64]) -> Result<Self, GeometryError> {
        Ok(project_to_sphere(values)?)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_inner(self) -> FeatureVector {
        self.values
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn scale(v: &[f64], c: f64) -> FeatureVector {
    v.iter().map(|x| x * c).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> FeatureVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> FeatureVector {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `v / ‖v‖`. Errors when `‖v‖ ≤ 1e−30`.
pub fn project_to_sphere(v: &[f64]) -> Result<UnitVector, GeometryError> {
    let n = norm(v);
    if n <= DEGENERATE_NORM {
        return Err(GeometryError::DegenerateVector {
            norm: n,
            limit: DEGENERATE_NORM,
        });
    }
    Ok(UnitVector {
        values: scale(v, 1.0 / n),
    })
}

/// The shared perturbation composition `‖h‖ · P(P(h) + λ·ε)`.
///
/// `lambda == 0` returns `h` unchanged (exact identity, no arithmetic).
/// `eps` must already be unit-norm; it is not re-normalized here so that
/// `lambda` keeps the same angular meaning for every caller.
pub fn hyperspherical_perturb(
    h: &[f64],
    eps: &UnitVector,
    lambda: f64,
) -> Result<FeatureVector, GeometryError> {
    debug_assert!(lambda >= 0.0, "perturbation magnitude must be nonnegative");
    if lambda == 0.0 {
        return Ok(h.to_vec());
    }
    let n = norm(h);
    if n <= DEGENERATE_NORM {
        return Err(GeometryError::DegenerateVector {
            norm: n,
            limit: DEGENERATE_NORM,
        });
    }
    let u = scale(h, 1.0 / n);
    let z = add(&u, &scale(eps.as_slice(), lambda));
    let w = project_to_sphere(&z)?;
    Ok(scale(w.as_slice(), n))
}

/// The on-sphere displacement `Δf = f − h` by its closed form,
/// `((1 − ‖u+λε‖)·u + λ·ε) · ‖h‖ / ‖u+λε‖` with `u = P(h)`.
///
/// Kept separate from [`hyperspherical_perturb`] so the two routes can be
/// cross-checked against each other.
pub fn decompose_delta(
    h: &[f64],
    eps: &UnitVector,
    lambda: f64,
) -> Result<FeatureVector, GeometryError> {
    if lambda == 0.0 {
        return Ok(vec![0.0; h.len()]);
    }
    let n = norm(h);
    if n <= DEGENERATE_NORM {
        return Err(GeometryError::DegenerateVector {
            norm: n,
            limit: DEGENERATE_NORM,
        });
    }
    let u = scale(h, 1.0 / n);
    let z = add(&u, &scale(eps.as_slice(), lambda));
    let zn = norm(&z);
    if zn <= DEGENERATE_NORM {
        return Err(GeometryError::DegenerateVector {
            norm: zn,
            limit: DEGENERATE_NORM,
        });
    }
    let mut delta = Vec::with_capacity(h.len());
    for i in 0..h.len() {
        delta.push(((1.0 - zn) * u[i] + lambda * eps.as_slice()[i]) * n / zn);
    }
    Ok(delta)
}

/// Angle between two vectors in degrees, in `[0, 180]`.
///
/// The cosine is clamped to `[-1, 1]` before `acos`; floating-point overshoot
/// would otherwise produce NaN for (anti)parallel inputs.
pub fn angle_between(u: &[f64], v: &[f64]) -> Result<f64, GeometryError> {
    let nu = norm(u);
    let nv = norm(v);
    for n in [nu, nv] {
        if n <= DEGENERATE_NORM {
            return Err(GeometryError::DegenerateVector {
                norm: n,
                limit: DEGENERATE_NORM,
            });
        }
    }
    let c = (dot(u, v) / (nu * nv)).clamp(-1.0, 1.0);
    Ok(c.acos().to_degrees())
}

/// Vector-Jacobian product of [`hyperspherical_perturb`] with respect to `h`.
///
/// With `u = P(h)`, `z = u + λε`, `w = P(z)` and `f = ‖h‖·w`:
///
/// ```text
/// ∂f/∂h = w·uᵀ + (I − w·wᵀ)(I − u·uᵀ)/‖z‖
/// ```
///
/// so for an incoming gradient `g = ∂L/∂f` this returns
/// `u·(wᵀg) + (I − u·uᵀ)(I − w·wᵀ)·g / ‖z‖`. `eps` is treated as a constant
/// (every variant detaches its direction branch).
pub fn hyperspherical_perturb_vjp(
    h: &[f64],
    eps: &UnitVector,
    lambda: f64,
    grad_out: &[f64],
) -> Result<FeatureVector, GeometryError> {
    if lambda == 0.0 {
        return Ok(grad_out.to_vec());
    }
    let n = norm(h);
    if n <= DEGENERATE_NORM {
        return Err(GeometryError::DegenerateVector {
            norm: n,
            limit: DEGENERATE_NORM,
        });
    }
    let u = scale(h, 1.0 / n);
    let z = add(&u, &scale(eps.as_slice(), lambda));
    let zn = norm(&z);
    if zn <= DEGENERATE_NORM {
        return Err(GeometryError::DegenerateVector {
            norm: zn,
            limit: DEGENERATE_NORM,
        });
    }
    let w = scale(&z, 1.0 / zn);
    // t = (I − w wᵀ) g
    let wg = dot(&w, grad_out);
    let t: FeatureVector = grad_out.iter().zip(&w).map(|(g, wi)| g - wg * wi).collect();
    // u·(wᵀg) carries the norm branch; (I − u uᵀ)t/‖z‖ the direction branch.
    let ut = dot(&u, &t);
    Ok(u.iter()
        .zip(&t)
        .map(|(ui, ti)| ui * wg + (ti - ut * ui) / zn)
        .collect())
}
