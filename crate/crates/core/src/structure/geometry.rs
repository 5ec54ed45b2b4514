use crate::error::{Error, Result};
use crate::exact::{brute_force_opt, EnumerationBudget};
use crate::model::{tree_weight, Instance, VertexId};
use crate::solvers::mst_terminals;

/// Degree a Steiner vertex of a stable optimum must exceed: `2/(2−γ)`.
pub fn steiner_degree_lower_bound(gamma: f64) -> f64 {
    2.0 / (2.0 - gamma)
}

/// Degree bound `−2/(2−γ²)` for Steiner vertices of a Euclidean stable
/// optimum, meaningful for `γ > √2`.
pub fn steiner_degree_upper_bound(gamma: f64) -> f64 {
    -2.0 / (2.0 - gamma * gamma)
}

/// `(√17 − 1)/2`: from this γ on, the two degree bounds leave no room for a
/// Steiner vertex, so Euclidean stable optima are terminal spanning trees.
pub fn no_steiner_threshold() -> f64 {
    (17f64.sqrt() - 1.0) / 2.0
}

/// `2·arcsin(γ/2)`, the angle two terminal neighbours of a Steiner vertex
/// must exceed. Defined for `γ ∈ [0, 2]`.
pub fn angle_threshold(gamma: f64) -> f64 {
    2.0 * (gamma / 2.0).asin()
}

/// Angle `∠a s b` in radians from coordinates.
pub fn angle_at(instance: &Instance, s: VertexId, a: VertexId, b: VertexId) -> Result<f64> {
    let (Some(ps), Some(pa), Some(pb)) = (instance.coord(s), instance.coord(a), instance.coord(b))
    else {
        return Err(Error::MissingCoordinates);
    };
    let u: Vec<f64> = pa.iter().zip(ps).map(|(x, y)| x - y).collect();
    let v: Vec<f64> = pb.iter().zip(ps).map(|(x, y)| x - y).collect();
    let dot: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0).acos())
}

/// Largest number of unit vectors, in any dimension, whose pairwise angles
/// all exceed `theta ∈ (π/2, π]`.
///
/// With `c = cos θ < 0`, `|Σ vᵢ|² ≥ 0` forces `N < 1 − 1/c`, and the regular
/// simplex attains every `N` below that bound. When `−1/c` is an integer `k`
/// (within 1e-9, to absorb the rounding of `cos`) the answer is `k`, e.g. 2
/// at 120° and 1 at 180°. Saturates at `usize::MAX` as `θ → π/2`.
pub fn max_packing_count(theta: f64) -> Result<usize> {
    if !(theta > std::f64::consts::FRAC_PI_2 && theta <= std::f64::consts::PI) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    let k = -1.0 / theta.cos();
    if !k.is_finite() || k >= usize::MAX as f64 {
        return Ok(usize::MAX);
    }
    let nearest = k.round();
    if (k - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        Ok(nearest as usize)
    } else {
        Ok(k.floor() as usize + 1)
    }
}

/// Weight of the terminal minimum spanning tree over the exact optimum.
pub fn steiner_ratio(instance: &Instance, budget: EnumerationBudget) -> Result<f64> {
    let mst = tree_weight(instance, &mst_terminals(instance))?;
    let opt = brute_force_opt(instance, budget)?;
    Ok(mst / opt.weight)
}
