use std::sync::Arc;

use super::UnitaryRep;
use crate::covariance::{ImprimitivitySystem, SpectralMeasure};
use crate::error::{Error, Result};
use crate::group::{CosetSpace, FiniteGroup};
use crate::linalg::{CMatrix, ONE};

/// Left regular representation: `V(g) δ_h = δ_{gh}`.
pub fn regular_representation(group: &Arc<FiniteGroup>) -> UnitaryRep {
    let n = group.order();
    let matrices = group
        .elements()
        .map(|g| {
            let mut m = CMatrix::zeros(n, n);
            for h in group.elements() {
                m[(group.mul(g, h), h)] = ONE;
            }
            m
        })
        .collect();
    UnitaryRep::new_unchecked(group.clone(), matrices)
}

/// Representation of `G` induced from a representation `R` of the little group.
///
/// The carrier is `C^{|S|} ⊗ C^{dim R}` (index `x·dim R + a`) with
/// `[V(g)ψ](x) = R(g_x⁻¹ g g_{x'}) ψ(x')`, `x' = Λ(g⁻¹)x`, and `E(x)` the
/// projector onto the `x`-th block. Counting measure is invariant, so no
/// density factor appears.
///
/// `R` must be a representation of `cs.subgroup().to_group()`, i.e. its
/// elements are the members of the little group in increasing index order.
pub fn induce(cs: &CosetSpace, inducing: &UnitaryRep) -> Result<ImprimitivitySystem> {
    let little = cs.subgroup().to_group();
    if inducing.group().as_ref() != &little {
        return Err(Error::Precondition(format!(
            "inducing representation is defined on {} (order {}), not on the little group of order {}",
            inducing.group().name(),
            inducing.group().order(),
            little.order()
        )));
    }
    let group = cs.group();
    let action = cs.action();
    let r = inducing.dim();
    let points = cs.len();
    let dim = points * r;

    let matrices = group
        .elements()
        .map(|g| {
            let mut v = CMatrix::zeros(dim, dim);
            let g_inv = group.inv(g);
            for x in 0..points {
                let x_prime = action.apply(g_inv, x);
                let h = cs.subgroup().position(cs.cocycle(g, x)).expect("cocycle lies in the little group");
                v.view_mut((x * r, x_prime * r), (r, r)).copy_from(inducing.matrix(h));
            }
            v
        })
        .collect();
    let rep = UnitaryRep::new_unchecked(group.clone(), matrices);

    let atoms = (0..points)
        .map(|x| {
            let mut p = CMatrix::zeros(dim, dim);
            for a in 0..r {
                p[(x * r + a, x * r + a)] = ONE;
            }
            p
        })
        .collect();
    let measure = SpectralMeasure::from_trusted(atoms);
    ImprimitivitySystem::new(action.clone(), rep, measure)
}
