//! Closed-form cohomology of k[x, y] per bidegree, with representatives.

use crate::cpoly::CPoly;
use crate::error::{Error, Result};
use crate::hochschild::cochain::PolyDiffCochain;

/// (h⁰, h¹, h²) at bidegree (r, s); higher groups vanish.
pub fn hkr_cohomology_dims(r: i64, s: i64) -> Result<(usize, usize, usize)> {
    if r < -1 || s < -1 {
        return Err(Error::OutOfRange(r, s));
    }
    Ok(match (r, s) {
        (-1, -1) => (0, 0, 1),
        (-1, _) | (_, -1) => (0, 1, 1),
        _ => (1, 2, 1),
    })
}

fn mono(a: i64, b: i64) -> Option<CPoly> {
    (a >= 0 && b >= 0).then(|| CPoly::mono(a as u32, b as u32))
}

/// Polyvector representatives: x^r y^s; x^{r+1}y^s ∂x and x^r y^{s+1} ∂y;
/// x^{r+1}y^{s+1} ∂x∧∂y.
pub fn hkr_representatives(n: usize, r: i64, s: i64) -> Result<Vec<PolyDiffCochain>> {
    hkr_cohomology_dims(r, s)?;
    let dx = PolyDiffCochain::partial(1, 0);
    let dy = PolyDiffCochain::partial(0, 1);
    Ok(match n {
        0 => mono(r, s).map(PolyDiffCochain::element).into_iter().collect(),
        1 => {
            let mut v = Vec::new();
            if let Some(a) = mono(r + 1, s) {
                v.push(PolyDiffCochain::vector_field(a, CPoly::zero()));
            }
            if let Some(b) = mono(r, s + 1) {
                v.push(PolyDiffCochain::vector_field(CPoly::zero(), b));
            }
            v
        }
        2 => vec![dx.wedge(&dy).mul_coeff(&mono(r + 1, s + 1).unwrap())],
        _ => vec![],
    })
}
