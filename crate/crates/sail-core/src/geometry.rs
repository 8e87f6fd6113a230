//! Reference domain, convex weight, and the pseudo-convex space-time weight.
//!
//! The domain is a rectangle `[0,Lx] x [0,Ly]` on a uniform node grid. The
//! bottom edge `y = 0` is the rigid wall; the remaining three edges form one
//! open polyline carrying the flexible beam, parameterized by arclength from
//! the bottom-left corner around to the bottom-right corner. The weight is
//! the canonical `d(x) = |x - x0|^2` with the anchor on the rigid-wall line,
//! and the space-time weight is `phi(x,t) = d(x) - c (t - T/2)^2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Which side of the rectangle a boundary node sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Bottom,
    Left,
    Top,
    Right,
}

/// Rectangle geometry with the rigid bottom edge and the three-edge beam.
#[derive(Debug, Clone)]
pub struct DomainGeometry<S> {
    pub nx: usize,
    pub ny: usize,
    pub lx: S,
    pub ly: S,
    pub hx: S,
    pub hy: S,
    /// Grid indices of the beam polyline, bottom-left corner first.
    beam_nodes: Vec<usize>,
    /// Cumulative arclength along the polyline.
    beam_arclength: Vec<S>,
    /// Grid indices of the rigid bottom edge (corners included).
    gamma1_nodes: Vec<usize>,
}

impl<S: Scalar> DomainGeometry<S> {
    #[inline]
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn node_ij(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [S; 2] {
        let (i, j) = self.node_ij(idx);
        [S::from_usize_lossy(i) * self.hx, S::from_usize_lossy(j) * self.hy]
    }

    /// Beam polyline grid indices (clamp endpoints included).
    pub fn beam_nodes(&self) -> &[usize] {
        &self.beam_nodes
    }

    /// Beam node count along the polyline.
    pub fn beam_node_count(&self) -> usize {
        self.beam_nodes.len()
    }

    /// Interior beam nodes (clamp endpoints excluded).
    pub fn beam_interior_count(&self) -> usize {
        self.beam_nodes.len() - 2
    }

    /// Grid index of interior beam node `k` (k = 0 .. interior count).
    #[inline]
    pub fn beam_interior_grid(&self, k: usize) -> usize {
        self.beam_nodes[k + 1]
    }

    pub fn beam_arclength(&self) -> &[S] {
        &self.beam_arclength
    }

    pub fn beam_length(&self) -> S {
        *self.beam_arclength.last().expect("nonempty polyline")
    }

    /// Uniform beam spacing; errors when the cells are not square.
    pub fn beam_spacing(&self) -> Result<S> {
        let rel = (self.hx - self.hy).abs() / self.hx.max(self.hy);
        if rel > lit::<S>(1e-12) {
            return Err(Error::NonuniformBeamSpacing { hx: self.hx.to_f64_lossy(), hy: self.hy.to_f64_lossy() });
        }
        Ok(self.hx)
    }

    /// Rigid-wall node indices (bottom edge, corners included).
    pub fn gamma1_nodes(&self) -> &[usize] {
        &self.gamma1_nodes
    }

    /// Clamp points: the two polyline endpoints on the rigid-wall line.
    pub fn clamp_points(&self) -> [usize; 2] {
        [self.beam_nodes[0], *self.beam_nodes.last().expect("nonempty polyline")]
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1
    }

    /// Edge of a beam node, with polyline corners reported as Left/Right of
    /// the adjoining vertical edge when ambiguous.
    pub fn beam_edge(&self, grid_idx: usize) -> Edge {
        let (i, j) = self.node_ij(grid_idx);
        if i == 0 {
            Edge::Left
        } else if j == self.ny - 1 {
            Edge::Top
        } else {
            debug_assert_eq!(i, self.nx - 1);
            Edge::Right
        }
    }

    /// Outward unit normal of a beam node; polyline corners use the
    /// normalized average of the two adjoining edge normals.
    pub fn beam_normal(&self, grid_idx: usize) -> [S; 2] {
        let (i, j) = self.node_ij(grid_idx);
        let top = j == self.ny - 1;
        let left = i == 0;
        let right = i == self.nx - 1;
        let inv_sqrt2 = S::one() / lit::<S>(2.0).sqrt();
        match (left, top, right) {
            (true, true, _) => [-inv_sqrt2, inv_sqrt2],
            (_, true, true) => [inv_sqrt2, inv_sqrt2],
            (true, _, _) => [-S::one(), S::zero()],
            (_, _, true) => [S::one(), S::zero()],
            (_, true, _) => [S::zero(), S::one()],
            _ => unreachable!("beam node off the polyline"),
        }
    }

    /// Lumped boundary length attached to beam node `k` (trapezoid weights
    /// along the polyline).
    pub fn beam_lumped_length(&self, k: usize) -> S {
        let s = &self.beam_arclength;
        let half = lit::<S>(0.5);
        if k == 0 {
            (s[1] - s[0]) * half
        } else if k + 1 == s.len() {
            (s[k] - s[k - 1]) * half
        } else {
            (s[k + 1] - s[k - 1]) * half
        }
    }

    /// Lumped boundary length of a rigid-wall node (trapezoid along y = 0).
    pub fn gamma1_lumped_length(&self, grid_idx: usize) -> S {
        let (i, _) = self.node_ij(grid_idx);
        if i == 0 || i == self.nx - 1 {
            self.hx * lit::<S>(0.5)
        } else {
            self.hx
        }
    }

    /// Lumped cell area of a grid node (tensor trapezoid weights).
    pub fn lumped_area(&self, idx: usize) -> S {
        let (i, j) = self.node_ij(idx);
        let half = lit::<S>(0.5);
        let wx = if i == 0 || i == self.nx - 1 { half } else { S::one() };
        let wy = if j == 0 || j == self.ny - 1 { half } else { S::one() };
        wx * wy * self.hx * self.hy
    }
}

/// Builds the reference rectangle with rigid bottom edge and beam polyline.
pub fn build_reference_domain<S: Scalar>(nx: usize, ny: usize, lx: S, ly: S) -> Result<DomainGeometry<S>> {
    if nx < 3 || ny < 3 {
        return Err(Error::ResolutionTooSmall { nx, ny });
    }
    if lx <= S::zero() || ly <= S::zero() {
        return Err(Error::NonpositiveExtent { lx: lx.to_f64_lossy(), ly: ly.to_f64_lossy() });
    }
    let hx = lx / S::from_usize_lossy(nx - 1);
    let hy = ly / S::from_usize_lossy(ny - 1);
    let mut beam_nodes = Vec::with_capacity(nx + 2 * ny - 2);
    let mut beam_arclength = Vec::with_capacity(nx + 2 * ny - 2);
    let mut s = S::zero();
    // Up the left edge.
    for j in 0..ny {
        beam_nodes.push(j * nx);
        beam_arclength.push(s);
        s = s + hy;
    }
    s = *beam_arclength.last().expect("left edge nonempty");
    // Across the top edge.
    for i in 1..nx {
        s = s + hx;
        beam_nodes.push((ny - 1) * nx + i);
        beam_arclength.push(s);
    }
    // Down the right edge.
    for j in (0..ny - 1).rev() {
        s = s + hy;
        beam_nodes.push(j * nx + (nx - 1));
        beam_arclength.push(s);
    }
    let gamma1_nodes = (0..nx).collect();
    Ok(DomainGeometry { nx, ny, lx, ly, hx, hy, beam_nodes, beam_arclength, gamma1_nodes })
}

/// Canonical convex weight `d(x) = |x - x0|^2`.
#[derive(Debug, Clone, Copy)]
pub struct ConvexWeight<S> {
    pub x0: [S; 2],
}

impl<S: Scalar> ConvexWeight<S> {
    /// Constructs without validating the anchor location.
    pub fn new_unchecked(x0: [S; 2]) -> Self {
        Self { x0 }
    }

    #[inline]
    pub fn d(&self, p: [S; 2]) -> S {
        let dx = p[0] - self.x0[0];
        let dy = p[1] - self.x0[1];
        dx * dx + dy * dy
    }

    /// Gradient field `h = grad d = 2 (x - x0)`.
    #[inline]
    pub fn h(&self, p: [S; 2]) -> [S; 2] {
        let two = lit::<S>(2.0);
        [two * (p[0] - self.x0[0]), two * (p[1] - self.x0[1])]
    }

    /// Constant Hessian `2 I`.
    #[inline]
    pub fn hessian(&self) -> [[S; 2]; 2] {
        let two = lit::<S>(2.0);
        [[two, S::zero()], [S::zero(), two]]
    }

    /// Laplacian of `d` (trace of the Hessian).
    #[inline]
    pub fn laplacian_d(&self) -> S {
        lit::<S>(4.0)
    }

    /// Extrema of `d` over the closed rectangle, scanned on the geometry grid
    /// refined by `refine` subdivisions per cell (1 = solver grid).
    pub fn extrema(&self, geometry: &DomainGeometry<S>, refine: usize) -> (S, S) {
        let refine = refine.max(1);
        let nx = (geometry.nx - 1) * refine + 1;
        let ny = (geometry.ny - 1) * refine + 1;
        let hx = geometry.lx / S::from_usize_lossy(nx - 1);
        let hy = geometry.ly / S::from_usize_lossy(ny - 1);
        let mut min_d = S::infinity();
        let mut max_d = S::neg_infinity();
        for j in 0..ny {
            for i in 0..nx {
                let v = self.d([S::from_usize_lossy(i) * hx, S::from_usize_lossy(j) * hy]);
                min_d = min_d.min(v);
                max_d = max_d.max(v);
            }
        }
        (min_d, max_d)
    }
}

/// Validated weight constructor: anchor must avoid the closed rectangle.
/// An anchor off the rigid-wall line is allowed here; that defect is a
/// warning-level failure reported by [`verify_assumptions`].
pub fn eval_weight<S: Scalar>(geometry: &DomainGeometry<S>, x0: [S; 2]) -> Result<ConvexWeight<S>> {
    let inside_x = x0[0] >= S::zero() && x0[0] <= geometry.lx;
    let inside_y = x0[1] >= S::zero() && x0[1] <= geometry.ly;
    if inside_x && inside_y {
        return Err(Error::AnchorOnClosure { x: x0[0].to_f64_lossy(), y: x0[1].to_f64_lossy() });
    }
    Ok(ConvexWeight::new_unchecked(x0))
}

/// Checks of the geometric hypotheses on the solver grid.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionReport {
    /// Smallest Hessian eigenvalue over the grid.
    pub rho: f64,
    /// Smallest |h| over the grid.
    pub s: f64,
    pub min_d: f64,
    pub max_d: f64,
    /// Largest |h . nu| over rigid-wall nodes.
    pub max_h_dot_nu: f64,
    pub hnu_tolerance: f64,
    pub pass_hessian: bool,
    pub pass_no_critical_point: bool,
    pub pass_rigid_wall_tangency: bool,
    pub pass: bool,
}

/// Absolute tolerance for the rigid-wall tangency check.
pub const HNU_TOLERANCE: f64 = 1e-12;

/// Evaluates the convexity, no-critical-point, and wall-tangency conditions
/// on the grid and reports fitted extrema. Failures land in flags, not errors.
pub fn verify_assumptions<S: Scalar>(geometry: &DomainGeometry<S>, weight: &ConvexWeight<S>) -> AssumptionReport {
    let hess = weight.hessian();
    let (a, b, c) = (hess[0][0], hess[0][1], hess[1][1]);
    let half = lit::<S>(0.5);
    let mean = (a + c) * half;
    let spread = (((a - c) * half) * ((a - c) * half) + b * b).sqrt();
    let rho = mean - spread;

    let mut s_min = S::infinity();
    let mut min_d = S::infinity();
    let mut max_d = S::neg_infinity();
    for idx in 0..geometry.node_count() {
        let p = geometry.coords(idx);
        let h = weight.h(p);
        let hn = (h[0] * h[0] + h[1] * h[1]).sqrt();
        s_min = s_min.min(hn);
        let d = weight.d(p);
        min_d = min_d.min(d);
        max_d = max_d.max(d);
    }

    let mut max_hnu = S::zero();
    for &idx in geometry.gamma1_nodes() {
        let p = geometry.coords(idx);
        let h = weight.h(p);
        // Outward normal on the bottom edge is (0, -1).
        max_hnu = max_hnu.max(h[1].abs());
    }

    let pass_hessian = rho > S::zero();
    let pass_no_critical_point = s_min > S::zero();
    let pass_rigid_wall_tangency = max_hnu.to_f64_lossy() <= HNU_TOLERANCE;
    AssumptionReport {
        rho: rho.to_f64_lossy(),
        s: s_min.to_f64_lossy(),
        min_d: min_d.to_f64_lossy(),
        max_d: max_d.to_f64_lossy(),
        max_h_dot_nu: max_hnu.to_f64_lossy(),
        hnu_tolerance: HNU_TOLERANCE,
        pass_hessian,
        pass_no_critical_point,
        pass_rigid_wall_tangency,
        pass: pass_hessian && pass_no_critical_point && pass_rigid_wall_tangency,
    }
}

/// Shortest admissible observation horizon `2 sqrt(max d)`.
pub fn min_observation_time<S: Scalar>(geometry: &DomainGeometry<S>, weight: &ConvexWeight<S>) -> S {
    let (_, max_d) = weight.extrema(geometry, 1);
    lit::<S>(2.0) * max_d.sqrt()
}

/// Everything needed to evaluate the space-time weight and its windows.
#[derive(Debug, Clone)]
pub struct CarlemanParams<S> {
    pub x0: [S; 2],
    /// Observation horizon.
    pub t_horizon: S,
    /// Weight curvature in time, 0 < c < 1.
    pub c: S,
    /// Endpoint margin: phi <= -delta at t = 0 and t = T.
    pub delta: S,
    /// Level threshold for the interior region, 0 < sigma < min d.
    pub sigma: S,
    pub t0: S,
    pub t1: S,
    pub k: S,
    pub alpha: S,
    pub tau_grid: Vec<S>,
    pub min_d: S,
    pub max_d: S,
}

impl<S: Scalar> CarlemanParams<S> {
    /// Largest tau whose weight stays within floating-point range.
    pub fn tau_cap(max_d: S) -> S {
        let ln_max = S::max_value().ln();
        (ln_max - lit::<S>(10.0)) / (lit::<S>(2.0) * max_d)
    }
}

/// Deterministic parameter selection for a horizon `T > T_min`:
/// `delta = (T^2 - 4 max_d)/8`, `c` halfway between its lower bound and 1,
/// `k = 1/2`, `alpha = lap(d) - 2c - 1 + k`, `sigma` defaulting to `min_d / 2`.
pub fn select_time_params<S: Scalar>(
    geometry: &DomainGeometry<S>,
    weight: &ConvexWeight<S>,
    t_horizon: S,
    sigma: Option<S>,
) -> Result<CarlemanParams<S>> {
    let (min_d, max_d) = weight.extrema(geometry, 1);
    let t_min = lit::<S>(2.0) * max_d.sqrt();
    if t_horizon <= t_min {
        return Err(Error::HorizonTooShort { t: t_horizon.to_f64_lossy(), t_min: t_min.to_f64_lossy() });
    }
    let four = lit::<S>(4.0);
    let t_sq = t_horizon * t_horizon;
    let delta = (t_sq - four * max_d) / lit::<S>(8.0);
    let c_low = (four * max_d + four * delta) / t_sq;
    let c = (c_low + S::one()) * lit::<S>(0.5);
    let k = lit::<S>(0.5);
    let alpha = weight.laplacian_d() - lit::<S>(2.0) * c - S::one() + k;
    let sigma = sigma.unwrap_or(min_d * lit::<S>(0.5));
    if sigma <= S::zero() || sigma >= min_d {
        return Err(Error::SigmaTooLarge { sigma: sigma.to_f64_lossy(), min_d: min_d.to_f64_lossy() });
    }
    let half_width = ((min_d - sigma) / c).sqrt();
    let t_mid = t_horizon * lit::<S>(0.5);
    let cap = CarlemanParams::tau_cap(max_d);
    let tau_grid: Vec<S> =
        [0.5, 1.0, 2.0, 4.0, 8.0, 16.0].iter().map(|&t| lit::<S>(t)).filter(|&t| t <= cap).collect();
    Ok(CarlemanParams {
        x0: weight.x0,
        t_horizon,
        c,
        delta,
        sigma,
        t0: t_mid - half_width,
        t1: t_mid + half_width,
        k,
        alpha,
        tau_grid,
        min_d,
        max_d,
    })
}

/// The pseudo-convex space-time weight `phi(x,t) = d(x) - c (t - T/2)^2`.
#[inline]
pub fn phi<S: Scalar>(x: [S; 2], t: S, params: &CarlemanParams<S>) -> S {
    let weight = ConvexWeight::new_unchecked(params.x0);
    let dt = t - params.t_horizon * lit::<S>(0.5);
    weight.d(x) - params.c * dt * dt
}

/// Indicator of `{ phi >= sigma }` on the space-time node grid.
#[derive(Debug, Clone)]
pub struct RegionMask {
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
    pub dt: f64,
    pub dx: f64,
    pub dy: f64,
    data: Vec<bool>,
}

impl RegionMask {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.data[(k * self.ny + j) * self.nx + i]
    }

    pub fn bytes(&self) -> Vec<u8> {
        self.data.iter().map(|&b| u8::from(b)).collect()
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }
}

/// Window endpoints for a level `sigma` plus the space-time indicator built
/// on `nt + 1` uniform time steps over `[0, T]`. The sandwich property
/// (window slab inside the region, region inside the cylinder) is asserted.
pub fn locate_sigma_window<S: Scalar>(
    geometry: &DomainGeometry<S>,
    params: &CarlemanParams<S>,
    sigma: S,
    nt: usize,
) -> Result<(S, S, RegionMask)> {
    if sigma <= S::zero() || sigma >= params.min_d {
        return Err(Error::SigmaTooLarge { sigma: sigma.to_f64_lossy(), min_d: params.min_d.to_f64_lossy() });
    }
    let half_width = ((params.min_d - sigma) / params.c).sqrt();
    let t_mid = params.t_horizon * lit::<S>(0.5);
    let (t0, t1) = (t_mid - half_width, t_mid + half_width);
    let dt = params.t_horizon / S::from_usize_lossy(nt);
    let mut data = vec![false; geometry.node_count() * (nt + 1)];
    for k in 0..=nt {
        let t = dt * S::from_usize_lossy(k);
        for idx in 0..geometry.node_count() {
            let inside = phi(geometry.coords(idx), t, params) >= sigma;
            data[k * geometry.node_count() + idx] = inside;
            if t >= t0 && t <= t1 {
                debug_assert!(inside, "window slab must lie inside the region");
            }
        }
    }
    let mask = RegionMask {
        nx: geometry.nx,
        ny: geometry.ny,
        nt: nt + 1,
        dt: dt.to_f64_lossy(),
        dx: geometry.hx.to_f64_lossy(),
        dy: geometry.hy.to_f64_lossy(),
        data,
    };
    Ok((t0, t1, mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference() -> (DomainGeometry<f64>, ConvexWeight<f64>) {
        let g = build_reference_domain(33, 33, 1.0, 1.0).unwrap();
        let w = eval_weight(&g, [-1.0, 0.0]).unwrap();
        (g, w)
    }

    #[test]
    fn reference_grid_spacing_and_beam_count() {
        let (g, _) = reference();
        assert_eq!(g.hx, 1.0 / 32.0);
        assert_eq!(g.hy, 1.0 / 32.0);
        assert_eq!(g.beam_node_count(), 97);
        assert!((g.beam_length() - 3.0).abs() < 1e-14);
        let clamps = g.clamp_points();
        assert_eq!(g.node_ij(clamps[0]), (0, 0));
        assert_eq!(g.node_ij(clamps[1]), (32, 0));
    }

    #[test]
    fn beam_arclength_is_a_bijection_onto_boundary_nodes() {
        let (g, _) = reference();
        // No repeats, every non-bottom boundary node covered exactly once.
        let mut seen = vec![false; g.node_count()];
        for &idx in g.beam_nodes() {
            assert!(!seen[idx], "duplicate beam node");
            seen[idx] = true;
        }
        for j in 0..g.ny {
            for i in 0..g.nx {
                let on_beam = seen[g.node_index(i, j)];
                let expected = i == 0 || i == g.nx - 1 || j == g.ny - 1;
                assert_eq!(on_beam, expected, "node ({i},{j})");
            }
        }
        // Arclength strictly increasing with uniform spacing.
        for w in g.beam_arclength().windows(2) {
            assert!((w[1] - w[0] - g.hx).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_small_grids_and_bad_extent() {
        assert!(matches!(build_reference_domain(2, 33, 1.0, 1.0), Err(Error::ResolutionTooSmall { .. })));
        assert!(matches!(build_reference_domain(9, 9, 0.0, 1.0), Err(Error::NonpositiveExtent { .. })));
    }

    #[test]
    fn weight_point_values() {
        let (_, w) = reference();
        assert_eq!(w.d([0.0, 0.0]), 1.0);
        assert_eq!(w.h([1.0, 1.0]), [4.0, 2.0]);
        assert_eq!(w.hessian(), [[2.0, 0.0], [0.0, 2.0]]);
    }

    #[test]
    fn anchor_on_rigid_wall_is_rejected() {
        let g = build_reference_domain(9, 9, 1.0, 1.0).unwrap();
        assert!(matches!(eval_weight(&g, [0.5, 0.0]), Err(Error::AnchorOnClosure { .. })));
    }

    #[test]
    fn weight_extrema_on_fine_grid() {
        let (g, w) = reference();
        let (min_d, max_d) = w.extrema(&g, 4);
        assert!((min_d - 1.0).abs() < 1e-14);
        assert!((max_d - 5.0).abs() < 1e-14);
    }

    #[test]
    fn assumptions_pass_on_reference() {
        let (g, w) = reference();
        let rep = verify_assumptions(&g, &w);
        assert!((rep.rho - 2.0).abs() < 1e-14);
        assert!((rep.s - 2.0).abs() < 1e-14);
        assert!((rep.max_d - 5.0).abs() < 1e-14);
        assert_eq!(rep.max_h_dot_nu, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn off_hyperplane_anchor_fails_tangency() {
        let (g, _) = reference();
        let w = eval_weight(&g, [-1.0, 0.1]).unwrap();
        let rep = verify_assumptions(&g, &w);
        assert!((rep.max_h_dot_nu - 0.2).abs() < 1e-14);
        assert!(!rep.pass_rigid_wall_tangency);
        assert!(!rep.pass);
    }

    #[test]
    fn interior_anchor_kills_no_critical_point_flag() {
        let (g, _) = reference();
        // On a grid node, so |h| vanishes exactly there.
        let w = ConvexWeight::new_unchecked([0.5, 0.5]);
        let rep = verify_assumptions(&g, &w);
        assert_eq!(rep.s, 0.0);
        assert!(!rep.pass_no_critical_point);
    }

    #[test]
    fn min_observation_time_reference_and_shifted() {
        let (g, w) = reference();
        assert!((min_observation_time(&g, &w) - 2.0 * 5.0f64.sqrt()).abs() < 1e-12);
        let w2 = eval_weight(&g, [-2.0, 0.0]).unwrap();
        assert!((min_observation_time(&g, &w2) - 2.0 * 10.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn time_params_reference_horizon() {
        let (g, w) = reference();
        let p = select_time_params(&g, &w, 4.6, None).unwrap();
        assert!((p.delta - 0.145).abs() < 1e-12);
        assert!((p.c - (20.58 / 21.16 + 1.0) / 2.0).abs() < 1e-12);
        assert!(p.c > 0.0 && p.c < 1.0);
        // Selection rule satisfies both horizon inequalities by substitution.
        assert!(4.6f64.powi(2) > 4.0 * p.max_d + 4.0 * p.delta);
        assert!(p.c * 4.6f64.powi(2) > 4.0 * p.max_d + 4.0 * p.delta);
        assert!((p.alpha - (4.0 - 2.0 * p.c - 1.0 + 0.5)).abs() < 1e-14);
        assert_eq!(p.sigma, 0.5);
    }

    #[test]
    fn time_params_long_horizon() {
        let (g, w) = reference();
        let p = select_time_params(&g, &w, 10.0, None).unwrap();
        assert!((p.delta - 10.0).abs() < 1e-12);
        assert!((p.c - 0.8).abs() < 1e-12);
    }

    #[test]
    fn horizon_at_threshold_is_rejected() {
        let (g, w) = reference();
        let t_min = min_observation_time(&g, &w);
        assert!(matches!(select_time_params(&g, &w, t_min, None), Err(Error::HorizonTooShort { .. })));
    }

    #[test]
    fn phi_midpoint_symmetry_and_endpoint_bound() {
        let (g, w) = reference();
        let p = select_time_params(&g, &w, 4.6, None).unwrap();
        for idx in [0usize, 17, 400, 1088] {
            let x = g.coords(idx);
            assert_eq!(phi(x, 2.3, &p), w.d(x));
            let off = 0.7;
            assert!((phi(x, 2.3 + off, &p) - phi(x, 2.3 - off, &p)).abs() < 1e-13);
        }
        // Endpoint property: phi(x, 0) <= -delta everywhere on the grid.
        let mut max_at_zero = f64::NEG_INFINITY;
        for idx in 0..g.node_count() {
            max_at_zero = max_at_zero.max(phi(g.coords(idx), 0.0, &p));
            assert!(phi(g.coords(idx), 0.0, &p) <= -p.delta + 1e-13);
            assert!((phi(g.coords(idx), 0.0, &p) - phi(g.coords(idx), 4.6, &p)).abs() < 1e-12);
        }
        assert!((max_at_zero - (5.0 - p.c * 2.3 * 2.3)).abs() < 1e-12);
    }

    #[test]
    fn sigma_window_reference_values_and_sandwich() {
        let (g, w) = reference();
        let p = select_time_params(&g, &w, 4.6, None).unwrap();
        let (t0, t1, mask) = locate_sigma_window(&g, &p, 0.5, 256).unwrap();
        let half = (0.5 / p.c).sqrt();
        assert!((t0 - (2.3 - half)).abs() < 1e-12);
        assert!((t1 - (2.3 + half)).abs() < 1e-12);
        assert!((half - 0.71201).abs() < 1e-5);
        // Slab inside the region.
        let dt = 4.6 / 256.0;
        for k in 0..=256 {
            let t = dt * k as f64;
            if t >= t0 && t <= t1 {
                for j in 0..g.ny {
                    for i in 0..g.nx {
                        assert!(mask.get(i, j, k));
                    }
                }
            }
        }
        // Region membership matches the weight sign pointwise.
        for k in (0..=256).step_by(37) {
            let t = dt * k as f64;
            for j in (0..g.ny).step_by(5) {
                for i in (0..g.nx).step_by(5) {
                    let inside = phi(g.coords(g.node_index(i, j)), t, &p) >= 0.5;
                    assert_eq!(mask.get(i, j, k), inside);
                }
            }
        }
        // phi at the spatial max point and t = T/2 is far inside.
        assert!(mask.get(g.nx - 1, g.ny - 1, 128));
    }

    #[test]
    fn sigma_at_min_d_is_rejected() {
        let (g, w) = reference();
        let p = select_time_params(&g, &w, 4.6, None).unwrap();
        assert!(matches!(locate_sigma_window(&g, &p, 1.0, 16), Err(Error::SigmaTooLarge { .. })));
        assert!(matches!(select_time_params(&g, &w, 4.6, Some(1.0)), Err(Error::SigmaTooLarge { .. })));
    }

    #[test]
    fn window_slab_min_matches_sigma_property() {
        let (g, w) = reference();
        let p = select_time_params(&g, &w, 4.6, None).unwrap();
        // phi >= sigma on [t0, t1] x Omega, checked on a dense sample.
        for kt in 0..=40 {
            let t = p.t0 + (p.t1 - p.t0) * kt as f64 / 40.0;
            for idx in (0..g.node_count()).step_by(7) {
                assert!(phi(g.coords(idx), t, &p) >= p.sigma - 1e-12);
            }
        }
    }

    #[test]
    fn doubling_horizon_decreases_c_and_increases_delta() {
        let (g, w) = reference();
        let mut last_c = f64::INFINITY;
        let mut last_delta = 0.0;
        for t in [4.6, 9.2, 18.4, 36.8] {
            let p = select_time_params(&g, &w, t, None).unwrap();
            assert!(p.c < last_c, "c must strictly decrease with T");
            assert!(p.delta > last_delta, "delta must strictly increase with T");
            last_c = p.c;
            last_delta = p.delta;
        }
    }

    #[test]
    fn tau_grid_respects_overflow_cap() {
        let (g, w) = reference();
        let p = select_time_params(&g, &w, 4.6, None).unwrap();
        let cap = CarlemanParams::<f64>::tau_cap(p.max_d);
        assert!((cap - 69.978).abs() < 0.1);
        assert!(p.tau_grid.iter().all(|&t| t <= cap));
        assert_eq!(p.tau_grid.len(), 6);
    }
}
