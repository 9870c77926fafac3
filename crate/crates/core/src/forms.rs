//! Differential forms with trig-polynomial coefficients and their pairing
//! with leaf patches: normalized currents and the closedness defect.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::foliation::{ChainPatch, MeshPatch, PolyPatch};
use crate::math::Real;
use crate::trig::ScalarTrigPoly;
use crate::{Error, Result};

/// 3-point Gauss–Legendre nodes and weights on [0, 1].
const GAUSS3: [(f64, f64); 3] = [
    (0.1127016653792583, 0.2777777777777778),
    (0.5, 0.4444444444444444),
    (0.8872983346207417, 0.2777777777777778),
];

/// A k-form `Σ_I c_I(x) dx_I` with trig-polynomial coefficients and strictly
/// increasing multi-indices. Degree 0 is a scalar potential.
#[derive(Clone, Debug)]
pub struct DifferentialForm {
    pub degree: usize,
    pub dim: usize,
    pub terms: Vec<(ScalarTrigPoly, Vec<usize>)>,
}

impl DifferentialForm {
    pub fn new(
        degree: usize,
        dim: usize,
        terms: Vec<(ScalarTrigPoly, Vec<usize>)>,
    ) -> Result<Self> {
        for (_, idx) in &terms {
            if idx.len() != degree
                || idx.iter().any(|&i| i >= dim)
                || idx.windows(2).any(|w| w[0] >= w[1])
            {
                return Err(Error::DegreeMismatch);
            }
        }
        Ok(Self { degree, dim, terms })
    }

    /// The constant-coefficient 1-form dx_i.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        Self::new(
            1,
            dim,
            alloc::vec![(ScalarTrigPoly::constant(1.0), alloc::vec![i])],
        )
        .unwrap()
    }

    /// A potential (0-form) given by a scalar trig polynomial.
    pub fn potential(dim: usize, poly: ScalarTrigPoly) -> Self {
        Self {
            degree: 0,
            dim,
            terms: alloc::vec![(poly, Vec::new())],
        }
    }

    /// Pointwise ℓ² bound on the coefficient vector, which bounds the form
    /// on orthonormal frames.
    pub fn sup_bound(&self) -> f64 {
        Real::sqrt(
            self.terms
                .iter()
                .map(|(c, _)| {
                    let b = c.sup_bound();
                    b * b
                })
                .sum::<f64>(),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, idx)| {
                let mut c = c.clone();
                c.constant *= factor;
                for t in c.terms.iter_mut() {
                    t.0 *= factor;
                }
                (c, idx.clone())
            })
            .collect();
        Self {
            degree: self.degree,
            dim: self.dim,
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree || self.dim != other.dim {
            return Err(Error::DegreeMismatch);
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self {
            degree: self.degree,
            dim: self.dim,
            terms,
        })
    }

    fn eval_scalar(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, _)| c.eval(x)).sum()
    }
}

/// One evaluation of the normalized current `C_n(ω) = (1/Vol) ∫ ω`.
#[derive(Clone, Copy, Debug)]
pub struct CurrentSample {
    pub iterate: usize,
    pub value: f64,
    pub volume: f64,
}

/// Integrates the form over the patch with 3-point Gauss quadrature per
/// chord (k = 1) or the edge-midpoint rule per triangle (k = 2), then
/// normalizes by the patch volume.
pub fn evaluate_current(
    patch: &PolyPatch,
    form: &DifferentialForm,
    iterate: usize,
) -> Result<CurrentSample> {
    if form.degree != patch.degree() || form.dim != patch.dim() {
        return Err(Error::DegreeMismatch);
    }
    let volume = crate::foliation::patch_volume(patch);
    let integral = match patch {
        PolyPatch::Chain(c) => integrate_chain(c, form),
        PolyPatch::Mesh(m) => integrate_mesh(m, form),
    };
    Ok(CurrentSample {
        iterate,
        value: integral / volume,
        volume,
    })
}

fn integrate_chain(chain: &ChainPatch, form: &DifferentialForm) -> f64 {
    let dim = chain.dim;
    let n = chain.verts.len() / dim;
    let mut total = 0.0;
    let mut x = alloc::vec![0.0; dim];
    for s in 1..n {
        let a = &chain.verts[(s - 1) * dim..s * dim];
        let b = &chain.verts[s * dim..(s + 1) * dim];
        for (coef, idx) in &form.terms {
            let i = idx[0];
            let delta = b[i] - a[i];
            if delta == 0.0 {
                continue;
            }
            let mut acc = 0.0;
            for &(t, w) in &GAUSS3 {
                for d in 0..dim {
                    x[d] = a[d] + t * (b[d] - a[d]);
                }
                acc += w * coef.eval(&x);
            }
            total += acc * delta;
        }
    }
    total
}

fn integrate_mesh(mesh: &MeshPatch, form: &DifferentialForm) -> f64 {
    let dim = mesh.dim;
    let mut total = 0.0;
    let mut x = alloc::vec![0.0; dim];
    for t in &mesh.tris {
        let (a, b, c) = (t[0] as usize, t[1] as usize, t[2] as usize);
        let va = &mesh.verts[a * dim..(a + 1) * dim];
        let vb = &mesh.verts[b * dim..(b + 1) * dim];
        let vc = &mesh.verts[c * dim..(c + 1) * dim];
        for (coef, idx) in &form.terms {
            let (i, j) = (idx[0], idx[1]);
            // pullback Jacobian of dx_i ∧ dx_j, constant per flat triangle
            let e1i = vb[i] - va[i];
            let e1j = vb[j] - va[j];
            let e2i = vc[i] - va[i];
            let e2j = vc[j] - va[j];
            let jac = e1i * e2j - e1j * e2i;
            if jac == 0.0 {
                continue;
            }
            // edge-midpoint rule: exact through quadratics on the simplex
            let mut acc = 0.0;
            for (s, t) in [(0.5, 0.0), (0.5, 0.5), (0.0, 0.5)] {
                for d in 0..dim {
                    x[d] = va[d] + s * (vb[d] - va[d]) + t * (vc[d] - va[d]);
                }
                acc += coef.eval(&x) / 3.0;
            }
            total += acc * jac * 0.5;
        }
    }
    total
}

/// `C_n(dα)` computed through Stokes: α paired with the boundary of the
/// patch and normalized by the patch volume. For chains α is a potential
/// evaluated at the two endpoints; for meshes α is a 1-form integrated over
/// the boundary loop.
pub fn closedness_defect(patch: &PolyPatch, alpha: &DifferentialForm) -> Result<f64> {
    if alpha.degree + 1 != patch.degree() || alpha.dim != patch.dim() {
        return Err(Error::DegreeMismatch);
    }
    let volume = crate::foliation::patch_volume(patch);
    match patch {
        PolyPatch::Chain(c) => {
            let dim = c.dim;
            let n = c.verts.len() / dim;
            let start = &c.verts[0..dim];
            let end = &c.verts[(n - 1) * dim..n * dim];
            Ok((alpha.eval_scalar(end) - alpha.eval_scalar(start)) / volume)
        }
        PolyPatch::Mesh(m) => {
            let boundary = boundary_edges(m);
            let mut total = 0.0;
            let dim = m.dim;
            let mut x = alloc::vec![0.0; dim];
            for (a, b) in boundary {
                let va = &m.verts[a as usize * dim..(a as usize + 1) * dim];
                let vb = &m.verts[b as usize * dim..(b as usize + 1) * dim];
                for (coef, idx) in &alpha.terms {
                    let i = idx[0];
                    let delta = vb[i] - va[i];
                    if delta == 0.0 {
                        continue;
                    }
                    let mut acc = 0.0;
                    for &(t, w) in &GAUSS3 {
                        for d in 0..dim {
                            x[d] = va[d] + t * (vb[d] - va[d]);
                        }
                        acc += w * coef.eval(&x);
                    }
                    total += acc * delta;
                }
            }
            Ok(total / volume)
        }
    }
}

/// Directed boundary edges: edges used by exactly one triangle, with the
/// orientation induced by that triangle's winding.
pub fn boundary_edges(mesh: &MeshPatch) -> Vec<(u32, u32)> {
    let mut counts: BTreeMap<(u32, u32), (usize, (u32, u32))> = BTreeMap::new();
    for t in &mesh.tris {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            let key = if a < b { (a, b) } else { (b, a) };
            let e = counts.entry(key).or_insert((0, (a, b)));
            e.0 += 1;
        }
    }
    counts
        .into_values()
        .filter(|(c, _)| *c == 1)
        .map(|(_, e)| e)
        .collect()
}
