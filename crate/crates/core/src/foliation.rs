//! Unstable-leaf patches under iteration: seeding, adaptive refinement,
//! volume growth, and the Jacobian gap criterion.
//!
//! Patches live on lifts: vertices are points of ℝⁿ connected by short
//! edges, so chains and meshes stay on the true leaf image to second order
//! when refinement inserts mapped source-midpoints (never chord midpoints).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::diffeo::TrackedMap;
use crate::fit::{fit_line, LineFit};
use crate::intmat::IntegerMatrix;
use crate::linalg;
use crate::math::Real;
use crate::rng::{QuasiRandom, SplitMix64};
use crate::suspension::SuspensionFlow;
use crate::torus::TorusPoint;
use crate::{Error, Result};

pub const DEFAULT_MAX_EDGE: f64 = 0.02;
pub const DEFAULT_VERTEX_BUDGET: usize = 2_000_000;
pub const DEFAULT_WARMUP: usize = 60;

/// A polyline (k = 1) or triangulated disk (k = 2) tracking a piece of
/// unstable leaf. Vertices are lifted coordinates, flattened with stride
/// `dim`; lift consistency is maintained by construction.
#[derive(Clone, Debug)]
pub enum PolyPatch {
    Chain(ChainPatch),
    Mesh(MeshPatch),
}

#[derive(Clone, Debug)]
pub struct ChainPatch {
    pub dim: usize,
    pub verts: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct MeshPatch {
    pub dim: usize,
    pub verts: Vec<f64>,
    pub tris: Vec<[u32; 3]>,
}

impl PolyPatch {
    pub fn degree(&self) -> usize {
        match self {
            PolyPatch::Chain(_) => 1,
            PolyPatch::Mesh(_) => 2,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PolyPatch::Chain(c) => c.dim,
            PolyPatch::Mesh(m) => m.dim,
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            PolyPatch::Chain(c) => c.verts.len() / c.dim,
            PolyPatch::Mesh(m) => m.verts.len() / m.dim,
        }
    }

    /// Longest lifted edge.
    pub fn max_edge_len(&self) -> f64 {
        match self {
            PolyPatch::Chain(c) => {
                let n = c.verts.len() / c.dim;
                (1..n)
                    .map(|i| dist_flat(&c.verts, c.dim, i - 1, i))
                    .fold(0.0, f64::max)
            }
            PolyPatch::Mesh(m) => m
                .tris
                .iter()
                .flat_map(|t| {
                    [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
                        .into_iter()
                        .map(|(a, b)| dist_flat(&m.verts, m.dim, a as usize, b as usize))
                })
                .fold(0.0, f64::max),
        }
    }
}

#[inline]
fn dist_flat(verts: &[f64], dim: usize, a: usize, b: usize) -> f64 {
    let mut s = 0.0;
    for d in 0..dim {
        let diff = verts[a * dim + d] - verts[b * dim + d];
        s += diff * diff;
    }
    Real::sqrt(s)
}

/// k-volume of a patch: total lifted chord length (k = 1) or total lifted
/// triangle area (k = 2).
pub fn patch_volume(patch: &PolyPatch) -> f64 {
    match patch {
        PolyPatch::Chain(c) => {
            let n = c.verts.len() / c.dim;
            (1..n).map(|i| dist_flat(&c.verts, c.dim, i - 1, i)).sum()
        }
        PolyPatch::Mesh(m) => m
            .tris
            .iter()
            .map(|t| {
                let (a, b, c) = (t[0] as usize, t[1] as usize, t[2] as usize);
                let e1: Vec<f64> = (0..m.dim)
                    .map(|d| m.verts[b * m.dim + d] - m.verts[a * m.dim + d])
                    .collect();
                let e2: Vec<f64> = (0..m.dim)
                    .map(|d| m.verts[c * m.dim + d] - m.verts[a * m.dim + d])
                    .collect();
                0.5 * linalg::gram_volume(&[&e1, &e2])
            })
            .sum(),
    }
}

// ---- unstable frame by power iteration ----------------------------------

/// Orthonormal frame spanning the k strongest expanding directions at `x`,
/// obtained by pushing a fixed pseudo-random frame forward along the orbit
/// ending at `x` with per-step re-orthonormalization.
///
/// Frames from two warmup depths are compared; if the spanned subspace
/// keeps oscillating past the budget (as it does when the dominant
/// expansion is a complex rotation), that is an error — the map is not
/// partially hyperbolic at the configured strength.
pub fn unstable_frame(map: TrackedMap, x: &[f64], k: usize, warmup: usize) -> Result<Vec<Vec<f64>>> {
    let n = map.dim();
    assert!(k >= 1 && k <= n);
    let budget = warmup.max(8) * 6 + 240;
    let mut depth = warmup.max(8);
    let mut prev: Option<Vec<Vec<f64>>> = None;
    loop {
        let frame = push_frame(map, x, k, depth)?;
        if let Some(old) = &prev {
            let osc = subspace_gap(old, &frame);
            if osc < 1e-9 {
                return Ok(frame);
            }
            if depth + 7 > budget {
                return Err(Error::FrameNotConverged { oscillation: osc });
            }
        }
        prev = Some(frame);
        // increment coprime to every finite order an integer elliptic block
        // can have in dimension ≤ 4, so periodic rotations cannot alias
        depth += 7;
    }
}

fn push_frame(map: TrackedMap, x: &[f64], k: usize, depth: usize) -> Result<Vec<Vec<f64>>> {
    let n = map.dim();
    // orbit ending at x, reduced mod 1 so lifts stay bounded
    let back = map.reversed();
    let mut orbit = Vec::with_capacity(depth + 1);
    orbit.push(x.to_vec());
    for i in 0..depth {
        let prev = crate::diffeo::reduce(&back.lift_apply(&orbit[i])?);
        orbit.push(prev);
    }
    // fixed pseudo-random start frame, generic with probability one
    let mut rng = SplitMix64::new(0x7a57_ed00 + k as u64);
    let mut frame: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..n).map(|_| rng.next_f64() - 0.5).collect())
        .collect();
    linalg::orthonormalize(&mut frame);
    for src in orbit.iter().rev().take(depth) {
        let j = map.jacobian(src)?;
        for v in frame.iter_mut() {
            *v = j.mul_vec(v);
        }
        let diag = linalg::orthonormalize(&mut frame);
        if diag.iter().any(|&d| !d.is_finite() || d == 0.0) {
            return Err(Error::FrameNotConverged { oscillation: f64::INFINITY });
        }
    }
    Ok(frame)
}

/// Largest component of the new frame outside the span of the old one.
fn subspace_gap(old: &[Vec<f64>], new: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0_f64;
    for v in new {
        let mut residual = v.clone();
        for u in old {
            let p = linalg::dot(&residual, u);
            for (r, ui) in residual.iter_mut().zip(u) {
                *r -= p * ui;
            }
        }
        worst = worst.max(linalg::norm(&residual));
    }
    worst
}

// ---- seeding -------------------------------------------------------------

/// A k-disk of radius `r` centered at `x`, tangent to the numerically
/// seeded unstable subspace, realized as a straight chain or mesh in the
/// lift with every edge at most `max_edge`.
pub fn seed_unstable_disk(
    map: TrackedMap,
    x: &TorusPoint,
    r: f64,
    k: usize,
    max_edge: f64,
    warmup: usize,
) -> Result<PolyPatch> {
    assert!(r > 0.0 && r <= 0.25, "disk radius out of range");
    assert!(k == 1 || k == 2, "only k ∈ {{1,2}} patches are supported");
    let dim = map.dim();
    let center = x.lift();
    let frame = unstable_frame(map, &center, k, warmup)?;
    if k == 1 {
        let u = &frame[0];
        let segs = ((2.0 * r) / max_edge) as usize + 1;
        let mut verts = Vec::with_capacity((segs + 1) * dim);
        for i in 0..=segs {
            let t = -r + 2.0 * r * i as f64 / segs as f64;
            for d in 0..dim {
                verts.push(center[d] + t * u[d]);
            }
        }
        Ok(PolyPatch::Chain(ChainPatch { dim, verts }))
    } else {
        Ok(PolyPatch::Mesh(seed_mesh_disk(
            &center, &frame[0], &frame[1], r, max_edge,
        )))
    }
}

/// Polar-grid triangulation of a flat disk in the plane spanned by (u, v).
fn seed_mesh_disk(center: &[f64], u: &[f64], v: &[f64], r: f64, max_edge: f64) -> MeshPatch {
    let dim = center.len();
    // factor 1.5 keeps ring diagonals under the edge bound
    let rings = ((1.5 * r) / max_edge).ceil() as usize + 1;
    let around = 6 * rings;
    let mut verts: Vec<f64> = center.to_vec();
    for j in 1..=rings {
        let rad = r * j as f64 / rings as f64;
        for i in 0..around {
            let th = crate::math::TAU * i as f64 / around as f64;
            let (cu, cv) = (rad * th.cos(), rad * th.sin());
            for d in 0..dim {
                verts.push(center[d] + cu * u[d] + cv * v[d]);
            }
        }
    }
    let ring_start = |j: usize| 1 + (j - 1) * around;
    let mut tris: Vec<[u32; 3]> = Vec::new();
    for i in 0..around {
        let a = ring_start(1) + i;
        let b = ring_start(1) + (i + 1) % around;
        tris.push([0, a as u32, b as u32]);
    }
    for j in 1..rings {
        for i in 0..around {
            let a = ring_start(j) + i;
            let b = ring_start(j) + (i + 1) % around;
            let c = ring_start(j + 1) + (i + 1) % around;
            let d = ring_start(j + 1) + i;
            tris.push([a as u32, b as u32, c as u32]);
            tris.push([a as u32, c as u32, d as u32]);
        }
    }
    MeshPatch { dim, verts, tris }
}

// ---- iteration with refinement -------------------------------------------

/// Anything that can advance a lifted point one step; implemented by toral
/// diffeomorphisms in either direction and by suspension slice maps.
pub trait LiftStep {
    fn dim(&self) -> usize;
    fn step(&self, x: &[f64]) -> Result<Vec<f64>>;
}

impl LiftStep for TrackedMap<'_> {
    fn dim(&self) -> usize {
        TrackedMap::dim(self)
    }
    fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.lift_apply(x)
    }
}

/// One linear step `x ↦ M x` on a lift.
pub struct LinearStep<'a>(pub &'a IntegerMatrix);

impl LiftStep for LinearStep<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn step(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.0.apply_lift(x))
    }
}

/// Applies the map to every vertex, then refines until every lifted edge is
/// at most `max_edge`. New vertices are images of source midpoints, taken on
/// the source patch and then mapped, so the polyline stays on the true image
/// leaf to second order. Exceeding `budget` vertices is an error.
pub fn iterate_refine(
    map: &dyn LiftStep,
    patch: &PolyPatch,
    max_edge: f64,
    budget: usize,
) -> Result<PolyPatch> {
    match patch {
        PolyPatch::Chain(c) => iterate_chain(map, c, max_edge, budget).map(PolyPatch::Chain),
        PolyPatch::Mesh(m) => iterate_mesh(map, m, max_edge, budget).map(PolyPatch::Mesh),
    }
}

fn iterate_chain(
    map: &dyn LiftStep,
    chain: &ChainPatch,
    max_edge: f64,
    budget: usize,
) -> Result<ChainPatch> {
    let dim = chain.dim;
    let n = chain.verts.len() / dim;
    let src = |i: usize| &chain.verts[i * dim..(i + 1) * dim];
    let mut out: Vec<f64> = Vec::with_capacity(chain.verts.len());
    out.extend_from_slice(&map.step(src(0))?);
    let mut count = 1usize;
    let mut fa: Vec<f64> = out.clone();
    for i in 1..n {
        let fb = map.step(src(i))?;
        refine_segment(
            map, src(i - 1), src(i), &fa, &fb, max_edge, budget, &mut count, &mut out, 0,
        )?;
        fa = fb;
    }
    Ok(ChainPatch { dim, verts: out })
}

#[allow(clippy::too_many_arguments)]
fn refine_segment(
    map: &dyn LiftStep,
    a: &[f64],
    b: &[f64],
    fa: &[f64],
    fb: &[f64],
    max_edge: f64,
    budget: usize,
    count: &mut usize,
    out: &mut Vec<f64>,
    depth: usize,
) -> Result<()> {
    let gap: f64 = Real::sqrt(
        fa.iter()
            .zip(fb)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>(),
    );
    if gap <= max_edge || depth >= 48 {
        *count += 1;
        if *count > budget {
            return Err(Error::VertexBudget { budget });
        }
        out.extend_from_slice(fb);
        return Ok(());
    }
    let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
    let fm = map.step(&mid)?;
    refine_segment(map, a, &mid, fa, &fm, max_edge, budget, count, out, depth + 1)?;
    refine_segment(map, &mid, b, &fm, fb, max_edge, budget, count, out, depth + 1)
}

fn iterate_mesh(
    map: &dyn LiftStep,
    mesh: &MeshPatch,
    max_edge: f64,
    budget: usize,
) -> Result<MeshPatch> {
    let dim = mesh.dim;
    let mut src = mesh.verts.clone();
    let mut img: Vec<f64> = Vec::with_capacity(src.len());
    for i in 0..src.len() / dim {
        img.extend_from_slice(&map.step(&src[i * dim..(i + 1) * dim])?);
    }
    let mut tris = mesh.tris.clone();
    for _round in 0..64 {
        let mut long_edges: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for t in &tris {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                let key = if a < b { (a, b) } else { (b, a) };
                if long_edges.contains_key(&key) {
                    continue;
                }
                if dist_flat(&img, dim, a as usize, b as usize) > max_edge {
                    long_edges.insert(key, 0);
                }
            }
        }
        if long_edges.is_empty() {
            return Ok(MeshPatch { dim, verts: img, tris });
        }
        if img.len() / dim + long_edges.len() > budget {
            return Err(Error::VertexBudget { budget });
        }
        for ((a, b), new_idx) in long_edges.iter_mut() {
            let (a, b) = (*a as usize, *b as usize);
            let mid: Vec<f64> = (0..dim)
                .map(|d| 0.5 * (src[a * dim + d] + src[b * dim + d]))
                .collect();
            let fm = map.step(&mid)?;
            *new_idx = (src.len() / dim) as u32;
            src.extend_from_slice(&mid);
            img.extend_from_slice(&fm);
        }
        let mut next_tris: Vec<[u32; 3]> = Vec::with_capacity(tris.len() * 2);
        for t in &tris {
            subdivide_triangle(*t, &long_edges, &img, dim, &mut next_tris);
        }
        tris = next_tris;
    }
    Err(Error::RefinementStuck)
}

fn edge_key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn subdivide_triangle(
    t: [u32; 3],
    split: &BTreeMap<(u32, u32), u32>,
    img: &[f64],
    dim: usize,
    out: &mut Vec<[u32; 3]>,
) {
    let mids = [
        split.get(&edge_key(t[0], t[1])).copied(),
        split.get(&edge_key(t[1], t[2])).copied(),
        split.get(&edge_key(t[2], t[0])).copied(),
    ];
    let marked = mids.iter().flatten().count();
    match marked {
        0 => out.push(t),
        1 => {
            // rotate so the marked edge is (v0, v1)
            let rot = mids.iter().position(|m| m.is_some()).unwrap();
            let (v0, v1, v2) = (t[rot], t[(rot + 1) % 3], t[(rot + 2) % 3]);
            let m = mids[rot].unwrap();
            out.push([v0, m, v2]);
            out.push([m, v1, v2]);
        }
        2 => {
            // rotate so the unmarked edge is (v2, v0)
            let rot = mids.iter().position(|m| m.is_none()).unwrap();
            // unmarked edge index rot corresponds to edge (t[rot], t[rot+1])
            // relabel with v2 = t[rot], v0 = t[rot+1]
            let (v0, v1, v2) = (t[(rot + 1) % 3], t[(rot + 2) % 3], t[rot]);
            let m01 = split.get(&edge_key(v0, v1)).copied().unwrap();
            let m12 = split.get(&edge_key(v1, v2)).copied().unwrap();
            out.push([m01, v1, m12]);
            // split the quad (v0, m01, m12, v2) along its shorter image diagonal
            let d_a = dist_flat(img, dim, v0 as usize, m12 as usize);
            let d_b = dist_flat(img, dim, m01 as usize, v2 as usize);
            if d_a <= d_b {
                out.push([v0, m01, m12]);
                out.push([v0, m12, v2]);
            } else {
                out.push([v0, m01, v2]);
                out.push([m01, m12, v2]);
            }
        }
        _ => {
            let m01 = mids[0].unwrap();
            let m12 = mids[1].unwrap();
            let m20 = mids[2].unwrap();
            out.push([t[0], m01, m20]);
            out.push([m01, t[1], m12]);
            out.push([m20, m12, t[2]]);
            out.push([m01, m12, m20]);
        }
    }
}

// ---- volume growth --------------------------------------------------------

/// Log-volume series of an iterated leaf disk with the fitted growth rate.
#[derive(Clone, Debug)]
pub struct GrowthEstimate {
    pub log_volumes: Vec<(usize, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_range: (usize, usize),
}

fn fit_upper_half(log_volumes: &[(usize, f64)]) -> (LineFit, (usize, usize)) {
    let n_max = log_volumes.last().unwrap().0;
    let lo = n_max / 2;
    let pts: Vec<(f64, f64)> = log_volumes
        .iter()
        .filter(|(n, _)| *n >= lo)
        .map(|(n, v)| (*n as f64, *v))
        .collect();
    (fit_line(&pts), (lo, n_max))
}

/// Iterates a seeded unstable k-disk `n_max` times, recording ln Vol, and
/// fits the growth rate on the upper half of the iterate range (the
/// transient is discarded). The slope estimates the leaf volume growth.
pub fn estimate_volume_growth(
    map: TrackedMap,
    x: &TorusPoint,
    r: f64,
    k: usize,
    n_max: usize,
    max_edge: f64,
    budget: usize,
    warmup: usize,
) -> Result<GrowthEstimate> {
    if n_max < 6 {
        return Err(Error::TooFewIterates { n_max, min: 6 });
    }
    let mut patch = seed_unstable_disk(map, x, r, k, max_edge, warmup)?;
    let mut log_volumes = Vec::with_capacity(n_max + 1);
    log_volumes.push((0usize, patch_volume(&patch).ln()));
    for n in 1..=n_max {
        patch = iterate_refine(&map, &patch, max_edge, budget)?;
        log_volumes.push((n, patch_volume(&patch).ln()));
    }
    let (fit, n_range) = fit_upper_half(&log_volumes);
    Ok(GrowthEstimate {
        log_volumes,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        n_range,
    })
}

/// Volume growth along an invariant fiber of the suspension: a segment in a
/// 𝕋²-slice along the base map's unstable direction, driven by the time-τ
/// map. Each step applies the integer base-map power dictated by the roof
/// crossings of that step.
pub fn suspension_fiber_growth(
    flow: &SuspensionFlow,
    tau: f64,
    x: &TorusPoint,
    start_height: f64,
    r: f64,
    n_max: usize,
    max_edge: f64,
    budget: usize,
) -> Result<GrowthEstimate> {
    if n_max < 6 {
        return Err(Error::TooFewIterates { n_max, min: 6 });
    }
    let base = crate::diffeo::ToralDiffeo::linear_map(flow.base_map().clone());
    let tracked = TrackedMap::forward(&base);
    let mut patch = seed_unstable_disk(tracked, x, r, 1, max_edge, DEFAULT_WARMUP)?;
    let mut height = start_height;
    let mut log_volumes = Vec::with_capacity(n_max + 1);
    log_volumes.push((0usize, patch_volume(&patch).ln()));
    for n in 1..=n_max {
        let crossings = Real::floor(height + tau) as i64;
        height = crate::math::fract(height + tau);
        let power = flow.base_map().pow(crossings);
        patch = iterate_refine(&LinearStep(&power), &patch, max_edge, budget)?;
        log_volumes.push((n, patch_volume(&patch).ln()));
    }
    let (fit, n_range) = fit_upper_half(&log_volumes);
    Ok(GrowthEstimate {
        log_volumes,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        n_range,
    })
}

// ---- Jacobian gap -----------------------------------------------------------

/// Minimum over sample points of `J_k / J_{k−1}` with the witnessing point.
#[derive(Clone, Debug)]
pub struct JacobianGap {
    pub min_ratio: f64,
    pub argmin: Vec<f64>,
}

/// `J_k(x)`: expansion of the seeded unstable k-frame under the
/// differential. `J_{k−1}(x)`: product of the k−1 largest singular values of
/// the full differential (J₀ ≡ 1). The ratio exceeding 1 everywhere is the
/// open criterion certifying closed limit currents.
pub fn jacobian_gap(
    map: TrackedMap,
    k: usize,
    samples: usize,
    seed: u64,
    warmup: usize,
) -> Result<JacobianGap> {
    assert!(k >= 1);
    let dim = map.dim();
    let mut qr = QuasiRandom::new(dim, seed);
    let mut best: Option<JacobianGap> = None;
    for _ in 0..samples {
        let x = qr.next_point();
        let frame = unstable_frame(map, &x, k, warmup)?;
        let d = map.jacobian(&x)?;
        let pushed: Vec<Vec<f64>> = frame.iter().map(|v| d.mul_vec(v)).collect();
        let refs: Vec<&[f64]> = pushed.iter().map(|v| v.as_slice()).collect();
        let jk = linalg::gram_volume(&refs);
        let jk1 = if k == 1 {
            1.0
        } else {
            linalg::singular_values(&d).iter().take(k - 1).product()
        };
        let ratio = jk / jk1;
        if best.as_ref().map_or(true, |b| ratio < b.min_ratio) {
            best = Some(JacobianGap {
                min_ratio: ratio,
                argmin: x,
            });
        }
    }
    Ok(best.unwrap())
}

/// Angular error between a 1-frame and a reference direction, for tests and
/// reports.
pub fn direction_angle(frame: &[f64], reference: &[f64]) -> f64 {
    let c = Real::abs(linalg::dot(frame, reference)) / (linalg::norm(frame) * linalg::norm(reference));
    libm::acos(c.clamp(-1.0, 1.0))
}
