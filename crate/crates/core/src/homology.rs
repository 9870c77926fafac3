//! Induced action on the homology of the torus.
//!
//! For a map homotopic to the automorphism of an integer matrix A, the
//! action on H_k(𝕋ⁿ, ℝ) is the k-th exterior power Λᵏ A in the lexicographic
//! basis {e_{i₁}∧…∧e_{i_k}}. Its dominant eigendata gives the topological
//! growth of the unstable foliation and the homology class it carries.
//!
//! Characteristic polynomials are computed exactly in integer arithmetic
//! (Faddeev–LeVerrier), multiplicities come from exact gcd filtration, and
//! only the final root finding is floating point.

use alloc::vec;
use alloc::vec::Vec;

use crate::intmat::IntegerMatrix;
use crate::linalg::{self, MatF};
use crate::math::Real;
use crate::{Error, Result};

/// Minimal complex arithmetic for the root finder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn modulus(self) -> f64 {
        Real::hypot(self.re, self.im)
    }

    fn add(self, o: Complex) -> Complex {
        Complex::new(self.re + o.re, self.im + o.im)
    }

    fn sub(self, o: Complex) -> Complex {
        Complex::new(self.re - o.re, self.im - o.im)
    }

    fn mul(self, o: Complex) -> Complex {
        Complex::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    fn div(self, o: Complex) -> Complex {
        let d = o.re * o.re + o.im * o.im;
        Complex::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

/// Lexicographically ordered k-element subsets of {0, …, n−1}.
pub fn lex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// The induced map on H_k in the lexicographic wedge basis: entries are the
/// k×k minors of the base matrix.
#[derive(Clone, Debug)]
pub struct HomologyAction {
    pub base: IntegerMatrix,
    pub degree: usize,
    pub matrix: IntegerMatrix,
}

/// Λᵏ of an integer matrix. Entry (I, J) is the minor with rows I and
/// columns J.
pub fn exterior_power(a: &IntegerMatrix, k: usize) -> Result<HomologyAction> {
    let n = a.dim();
    if k == 0 || k > n {
        return Err(Error::Dimension);
    }
    let subsets = lex_subsets(n, k);
    let m = subsets.len();
    let mut entries = vec![0i64; m * m];
    for (row, rows) in subsets.iter().enumerate() {
        for (col, cols) in subsets.iter().enumerate() {
            entries[row * m + col] = a.minor(rows, cols);
        }
    }
    let matrix = IntegerMatrix::new(m, entries)?;
    Ok(HomologyAction {
        base: a.clone(),
        degree: k,
        matrix,
    })
}

// ---- exact characteristic polynomial ----------------------------------

/// Coefficients of det(xI − A), lowest degree first, by the
/// Faddeev–LeVerrier recurrence in i128 (all divisions exact).
pub fn char_poly(a: &IntegerMatrix) -> Vec<i128> {
    let n = a.dim();
    let ai: Vec<i128> = a.entries().iter().map(|&e| e as i128).collect();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut m = vec![0i128; n * n]; // M_0 = 0
    for step in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = vec![0i128; n * n];
        for i in 0..n {
            for l in 0..n {
                let v = ai[i * n + l];
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    next[i * n + j] += v * m[l * n + j];
                }
            }
        }
        for i in 0..n {
            next[i * n + i] += coeffs[n - step + 1];
        }
        // c_{n-k} = -tr(A·M_k)/k
        let mut tr = 0i128;
        for i in 0..n {
            for l in 0..n {
                tr += ai[i * n + l] * next[l * n + i];
            }
        }
        debug_assert_eq!(tr % step as i128, 0);
        coeffs[n - step] = -tr / step as i128;
        m = next;
    }
    coeffs
}

// ---- integer polynomial utilities --------------------------------------

fn poly_trim(p: &mut Vec<i128>) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

fn poly_deg(p: &[i128]) -> usize {
    p.len() - 1
}

fn poly_derivative(p: &[i128]) -> Vec<i128> {
    if p.len() <= 1 {
        return vec![0];
    }
    (1..p.len()).map(|i| p[i] * i as i128).collect()
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn poly_content(p: &[i128]) -> i128 {
    p.iter().fold(0, |acc, &c| gcd_i128(acc, c)).max(1)
}

fn poly_primitive(mut p: Vec<i128>) -> Vec<i128> {
    poly_trim(&mut p);
    let c = poly_content(&p);
    for v in p.iter_mut() {
        *v /= c;
    }
    if *p.last().unwrap() < 0 {
        for v in p.iter_mut() {
            *v = -*v;
        }
    }
    p
}

/// Primitive pseudo-remainder of a by b.
fn poly_pseudo_rem(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = poly_deg(b);
    let lb = *b.last().unwrap();
    while poly_deg(&r) >= db && !(r.len() == 1 && r[0] == 0) {
        let dr = poly_deg(&r);
        let lr = *r.last().unwrap();
        // r = r*lb - lr*x^(dr-db)*b
        let mut next = vec![0i128; dr.max(db + dr - db) + 1];
        for (i, &c) in r.iter().enumerate() {
            next[i] = c * lb;
        }
        for (i, &c) in b.iter().enumerate() {
            next[i + dr - db] -= lr * c;
        }
        poly_trim(&mut next);
        r = poly_primitive(next);
        if r.len() == 1 && r[0] == 0 {
            break;
        }
    }
    r
}

/// Primitive gcd of two integer polynomials.
fn poly_gcd(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut x = poly_primitive(a.to_vec());
    let mut y = poly_primitive(b.to_vec());
    if poly_deg(&x) < poly_deg(&y) {
        core::mem::swap(&mut x, &mut y);
    }
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_pseudo_rem(&x, &y);
        x = y;
        y = r;
    }
    poly_primitive(x)
}

/// Exact division of primitive polynomials (Gauss's lemma guarantees an
/// integer quotient when b | a with both primitive).
fn poly_div_exact(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let db = poly_deg(b);
    let lb = *b.last().unwrap();
    let mut q = vec![0i128; poly_deg(&r).saturating_sub(db) + 1];
    while poly_deg(&r) >= db && !(r.len() == 1 && r[0] == 0) {
        let dr = poly_deg(&r);
        let lr = *r.last().unwrap();
        debug_assert_eq!(lr % lb, 0, "division not exact");
        let f = lr / lb;
        q[dr - db] = f;
        for (i, &c) in b.iter().enumerate() {
            r[i + dr - db] -= f * c;
        }
        poly_trim(&mut r);
        if r.iter().all(|&c| c == 0) {
            break;
        }
    }
    q
}

// ---- floating-point root finding ----------------------------------------

fn poly_eval_c(p: &[f64], z: Complex) -> Complex {
    let mut v = Complex::ZERO;
    for &c in p.iter().rev() {
        v = v.mul(z).add(Complex::new(c, 0.0));
    }
    v
}

/// All roots of a square-free integer polynomial by Durand–Kerner, polished
/// by Newton. Reports non-convergence instead of returning junk.
fn roots_square_free(p: &[i128]) -> Result<Vec<Complex>> {
    let deg = poly_deg(p);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = *p.last().unwrap() as f64;
    let pf: Vec<f64> = p.iter().map(|&c| c as f64 / lead).collect();
    let radius = 1.0
        + pf[..deg]
            .iter()
            .fold(0.0_f64, |m, &c| if Real::abs(c) > m { Real::abs(c) } else { m });
    let seed = Complex::new(0.4, 0.9);
    let mut zs: Vec<Complex> = Vec::with_capacity(deg);
    let mut acc = Complex::new(radius, 0.0);
    for _ in 0..deg {
        acc = acc.mul(seed);
        zs.push(acc);
    }
    let mut converged = false;
    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for i in 0..deg {
            let mut den = Complex::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    den = den.mul(zs[i].sub(zs[j]));
                }
            }
            let delta = poly_eval_c(&pf, zs[i]).div(den);
            zs[i] = zs[i].sub(delta);
            let step = delta.modulus() / (1.0 + zs[i].modulus());
            if step > max_step {
                max_step = step;
            }
        }
        if max_step < 1e-14 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::RootFinder);
    }
    // Newton polish: roots are simple, so this is quadratic
    let dpf: Vec<f64> = (1..pf.len()).map(|i| pf[i] * i as f64).collect();
    for z in zs.iter_mut() {
        for _ in 0..8 {
            let f = poly_eval_c(&pf, *z);
            let d = poly_eval_c(&dpf, *z);
            if d.modulus() == 0.0 {
                break;
            }
            *z = z.sub(f.div(d));
        }
        // collapse numerically-real roots onto the axis
        if Real::abs(z.im) < 1e-9 * (1.0 + Real::abs(z.re)) {
            z.im = 0.0;
        }
    }
    Ok(zs)
}

fn poly_eval_abs(p: &[i128], z: Complex) -> f64 {
    let pf: Vec<f64> = p.iter().map(|&c| c as f64).collect();
    poly_eval_c(&pf, z).modulus()
}

/// Roots with multiplicities via the gcd filtration: the square-free part
/// carries the distinct roots; a root's multiplicity is one more than its
/// multiplicity in gcd(p, p′).
fn roots_with_multiplicity(p: &[i128]) -> Result<Vec<(Complex, usize)>> {
    let p = poly_primitive(p.to_vec());
    if poly_deg(&p) == 0 {
        return Ok(Vec::new());
    }
    let dp = poly_derivative(&p);
    let g = poly_gcd(&p, &dp);
    if poly_deg(&g) == 0 {
        return Ok(roots_square_free(&p)?.into_iter().map(|z| (z, 1)).collect());
    }
    let square_free = poly_div_exact(&p, &g);
    let inner = roots_with_multiplicity(&g)?;
    let mut out = Vec::new();
    for z in roots_square_free(&square_free)? {
        let repeated = inner
            .iter()
            .find(|(w, _)| z.sub(*w).modulus() < 1e-6 * (1.0 + z.modulus()));
        let mult = 1 + repeated.map_or(0, |(_, m)| *m);
        // snap to the sharper estimate when the root also sits in g
        let z = match repeated {
            Some((w, _)) if poly_eval_abs(&p, *w) < poly_eval_abs(&p, z) => *w,
            _ => z,
        };
        out.push((z, mult));
    }
    Ok(out)
}

// ---- spectra ------------------------------------------------------------

/// Eigenvalues with multiplicities, sorted by modulus descending.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<(Complex, usize)>,
    pub dominant_modulus: f64,
    pub dominant_simple: bool,
}

pub fn spectrum(h: &HomologyAction) -> Result<SpectrumReport> {
    spectrum_of(&h.matrix)
}

pub fn spectrum_of(m: &IntegerMatrix) -> Result<SpectrumReport> {
    let cp = char_poly(m);
    let mut eig = roots_with_multiplicity(&cp)?;
    let total: usize = eig.iter().map(|(_, m)| m).sum();
    if total != m.dim() {
        return Err(Error::RootFinder);
    }
    eig.sort_by(|(a, _), (b, _)| {
        b.modulus()
            .partial_cmp(&a.modulus())
            .unwrap()
            .then(b.re.partial_cmp(&a.re).unwrap())
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    let dominant_modulus = eig[0].0.modulus();
    let at_top: usize = eig
        .iter()
        .filter(|(z, _)| z.modulus() > dominant_modulus * (1.0 - 1e-9))
        .map(|(_, m)| m)
        .sum();
    Ok(SpectrumReport {
        dominant_modulus,
        dominant_simple: at_top == 1,
        eigenvalues: eig,
    })
}

/// Topological growth of the k-dimensional unstable foliation of the linear
/// model, with the uniqueness certificate.
#[derive(Clone, Debug)]
pub struct TopologicalGrowth {
    pub lambda: f64,
    pub unique: bool,
}

/// Dominant eigenvalue modulus of Λᵏ A, valid only when A's expanding
/// eigenvalues (|λ| > 1, with multiplicity) span exactly k dimensions.
pub fn topological_growth(a: &IntegerMatrix, k: usize) -> Result<TopologicalGrowth> {
    let base = spectrum_of(a)?;
    let expanding: usize = base
        .eigenvalues
        .iter()
        .filter(|(z, _)| z.modulus() > 1.0 + 1e-9)
        .map(|(_, m)| m)
        .sum();
    if expanding != k {
        let moduli = base
            .eigenvalues
            .iter()
            .flat_map(|(z, m)| core::iter::repeat(z.modulus()).take(*m))
            .collect();
        return Err(Error::UnstableDimension {
            expected: k,
            actual: expanding,
            moduli,
        });
    }
    let wedge = spectrum(&exterior_power(a, k)?)?;
    Ok(TopologicalGrowth {
        lambda: wedge.dominant_modulus,
        unique: wedge.dominant_simple,
    })
}

/// The homology class carried by the unstable foliation of the linear model:
/// unit dominant eigenvector of Λᵏ A, sign fixed so the first nonzero
/// coordinate is positive.
#[derive(Clone, Debug)]
pub struct HomologyClass {
    pub coords: Vec<f64>,
    pub degree: usize,
}

pub fn unstable_homology_class(a: &IntegerMatrix, k: usize) -> Result<HomologyClass> {
    let growth = topological_growth(a, k)?;
    if !growth.unique {
        return Err(Error::DominantNotSimple);
    }
    let action = exterior_power(a, k)?;
    let m = action.matrix.to_matf();
    let n = m.rows;
    // inverse iteration with a slightly shifted dominant eigenvalue
    let shift = growth.lambda * (1.0 + 1e-9) + 1e-9;
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let mut v = vec![1.0; n];
    for boost in 0..4 {
        let mut ok = true;
        for _ in 0..40 {
            let Some(next) = linalg::solve(&shifted, &v) else {
                ok = false;
                break;
            };
            let nrm = linalg::norm(&next);
            if !nrm.is_finite() || nrm == 0.0 {
                ok = false;
                break;
            }
            v = next.into_iter().map(|c| c / nrm).collect();
        }
        let residual = eigen_residual(&m, &v, growth.lambda);
        if ok && residual < 1e-10 {
            break;
        }
        if boost == 3 {
            return Err(Error::RootFinder);
        }
        // nudge the shift and retry
        for i in 0..n {
            shifted[(i, i)] -= 1e-6 * growth.lambda;
        }
        v = vec![1.0; n];
    }
    let first_nonzero = v.iter().find(|c| c.abs() > 1e-12).copied().unwrap_or(1.0);
    if first_nonzero < 0.0 {
        for c in v.iter_mut() {
            *c = -*c;
        }
    }
    Ok(HomologyClass {
        coords: v,
        degree: k,
    })
}

fn eigen_residual(m: &MatF, v: &[f64], lambda: f64) -> f64 {
    let mv = m.mul_vec(v);
    let mut s = 0.0;
    for (a, b) in mv.iter().zip(v) {
        let d = a - lambda * b;
        s += d * d;
    }
    Real::sqrt(s) / linalg::norm(v)
}

/// ‖matrix·v − λ·v‖ / ‖v‖, the eigen-relation residual.
pub fn check_eigen_relation(h: &HomologyAction, v: &HomologyClass, lambda: f64) -> Result<f64> {
    if v.degree != h.degree || v.coords.len() != h.matrix.dim() {
        return Err(Error::Dimension);
    }
    Ok(eigen_residual(&h.matrix.to_matf(), &v.coords, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    const GOLDEN: f64 = 2.618033988749895; // (3+√5)/2, root of x²−3x+1

    fn ph3() -> IntegerMatrix {
        IntegerMatrix::new(3, vec![2, 1, 0, 1, 1, 0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn wedge_of_degree_one_is_the_matrix() {
        let a = IntegerMatrix::cat();
        let h = exterior_power(&a, 1).unwrap();
        assert_eq!(h.matrix.entries(), a.entries());
    }

    #[test]
    fn wedge_of_identity_is_identity() {
        let id = IntegerMatrix::identity(3);
        let h = exterior_power(&id, 2).unwrap();
        assert_eq!(h.matrix.entries(), IntegerMatrix::identity(3).entries());
    }

    #[test]
    fn wedge_two_of_block_matrix_matches_hand_minors() {
        // basis (e1∧e2, e1∧e3, e2∧e3)
        let h = exterior_power(&ph3(), 2).unwrap();
        assert_eq!(h.matrix.entries(), &[1, 0, 0, 0, 2, 1, 0, 1, 1]);
    }

    #[test]
    fn char_poly_of_cat_is_x2_minus_3x_plus_1() {
        assert_eq!(char_poly(&IntegerMatrix::cat()), vec![1, -3, 1]);
    }

    #[test]
    fn cat_spectrum_matches_quadratic_roots() {
        let s = spectrum_of(&IntegerMatrix::cat()).unwrap();
        assert!((s.eigenvalues[0].0.re - GOLDEN).abs() < 1e-9);
        assert!((s.eigenvalues[1].0.re - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!(s.dominant_simple);
    }

    #[test]
    fn block_spectrum_keeps_center_eigenvalue() {
        let s = spectrum_of(&ph3()).unwrap();
        let moduli: Vec<f64> = s.eigenvalues.iter().map(|(z, _)| z.modulus()).collect();
        assert!((moduli[0] - GOLDEN).abs() < 1e-9);
        assert!((moduli[1] - 1.0).abs() < 1e-9);
        assert!((moduli[2] - 1.0 / GOLDEN).abs() < 1e-9);
    }

    #[test]
    fn identity_spectrum_is_all_ones() {
        let s = spectrum_of(&IntegerMatrix::identity(4)).unwrap();
        assert_eq!(s.eigenvalues.len(), 1);
        assert_eq!(s.eigenvalues[0].1, 4);
        assert!((s.dominant_modulus - 1.0).abs() < 1e-12);
        assert!(!s.dominant_simple);
    }

    #[test]
    fn unimodularity_of_spectra() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..40 {
            let a = crate::intmat::random_unimodular(3, 3, &mut rng);
            for k in 1..=3 {
                let h = exterior_power(&a, k).unwrap();
                assert_eq!(h.matrix.det().abs(), 1);
                let s = spectrum(&h).unwrap();
                let prod: f64 = s
                    .eigenvalues
                    .iter()
                    .map(|(z, m)| z.modulus().powi(*m as i32))
                    .product();
                assert!((prod - 1.0).abs() < 1e-7, "modulus product {prod}");
            }
        }
    }

    #[test]
    fn functoriality_is_exact_in_integers() {
        let mut rng = SplitMix64::new(123);
        for _ in 0..60 {
            let a = crate::intmat::random_unimodular(4, 3, &mut rng);
            let b = crate::intmat::random_unimodular(4, 3, &mut rng);
            for k in 1..=3 {
                let lhs = exterior_power(&a.mul(&b), k).unwrap();
                let rhs = exterior_power(&a, k)
                    .unwrap()
                    .matrix
                    .mul(&exterior_power(&b, k).unwrap().matrix);
                assert_eq!(lhs.matrix.entries(), rhs.entries());
            }
        }
    }

    #[test]
    fn growth_of_cat_is_golden_and_unique() {
        let g = topological_growth(&IntegerMatrix::cat(), 1).unwrap();
        assert!((g.lambda - GOLDEN).abs() < 1e-9);
        assert!(g.unique);
    }

    #[test]
    fn growth_rejects_identity() {
        match topological_growth(&IntegerMatrix::identity(2), 1) {
            Err(Error::UnstableDimension { actual, .. }) => assert_eq!(actual, 0),
            other => panic!("expected unstable-dimension error, got {other:?}"),
        }
    }

    #[test]
    fn growth_of_t4_product_is_golden_squared() {
        let t4 = IntegerMatrix::cat().direct_sum(&IntegerMatrix::cat());
        let g = topological_growth(&t4, 2).unwrap();
        assert!((g.lambda - GOLDEN * GOLDEN).abs() < 1e-9);
        assert!(g.unique, "dominant 2-form eigenvalue is simple");
        // dual route: product of the two largest base moduli
        let base = spectrum_of(&t4).unwrap();
        let mut moduli: Vec<f64> = base
            .eigenvalues
            .iter()
            .flat_map(|(z, m)| core::iter::repeat(z.modulus()).take(*m))
            .collect();
        moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((g.lambda - moduli[0] * moduli[1]).abs() < 1e-9);
    }

    #[test]
    fn unstable_class_of_cat_map() {
        let c = unstable_homology_class(&IntegerMatrix::cat(), 1).unwrap();
        assert!((c.coords[0] - 0.850650808352040).abs() < 1e-9);
        assert!((c.coords[1] - 0.525731112119134).abs() < 1e-9);
    }

    #[test]
    fn unstable_class_of_block_matrix_has_zero_center_component() {
        let c = unstable_homology_class(&ph3(), 1).unwrap();
        assert!((c.coords[0] - 0.850650808352040).abs() < 1e-9);
        assert!((c.coords[1] - 0.525731112119134).abs() < 1e-9);
        assert!(c.coords[2].abs() < 1e-9);
    }

    #[test]
    fn unstable_class_requires_expansion() {
        assert!(unstable_homology_class(&IntegerMatrix::identity(2), 1).is_err());
    }

    #[test]
    fn eigen_relation_residuals() {
        let a = IntegerMatrix::cat();
        let h = exterior_power(&a, 1).unwrap();
        let v = unstable_homology_class(&a, 1).unwrap();
        let r = check_eigen_relation(&h, &v, GOLDEN).unwrap();
        assert!(r < 1e-10, "residual {r}");

        // wrong eigenvalue: ‖Av − v‖ = (λ−1)‖v‖ ≈ 1.618
        let r1 = check_eigen_relation(&h, &v, 1.0).unwrap();
        assert!((r1 - (GOLDEN - 1.0)).abs() < 1e-9);

        let id = exterior_power(&IntegerMatrix::identity(2), 1).unwrap();
        let any = HomologyClass {
            coords: vec![0.6, 0.8],
            degree: 1,
        };
        assert_eq!(check_eigen_relation(&id, &any, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn duality_between_map_and_inverse() {
        // stable growth of A = unstable growth of A⁻¹
        let a = IntegerMatrix::cat();
        let gu = topological_growth(&a, 1).unwrap();
        let gs = topological_growth(&a.inverse(), 1).unwrap();
        assert!((gu.lambda - gs.lambda).abs() < 1e-9);
    }

    #[test]
    fn spectrum_invariant_under_unimodular_conjugation() {
        let mut rng = SplitMix64::new(7);
        let a = ph3();
        for _ in 0..20 {
            let p = crate::intmat::random_unimodular(3, 3, &mut rng);
            let conj = p.mul(&a).mul(&p.inverse());
            for k in 1..=2 {
                let s1 = spectrum(&exterior_power(&a, k).unwrap()).unwrap();
                let s2 = spectrum(&exterior_power(&conj, k).unwrap()).unwrap();
                assert_eq!(s1.eigenvalues.len(), s2.eigenvalues.len());
                for ((z1, m1), (z2, m2)) in s1.eigenvalues.iter().zip(&s2.eigenvalues) {
                    assert_eq!(m1, m2);
                    assert!(z1.sub(*z2).modulus() < 1e-9);
                }
            }
        }
    }
}
