//! Finite-difference spatial operators.
//!
//! Second-order centered stencils throughout. Neumann data enters through
//! ghost-node elimination (mirror plus `2h * flux`), which in flux form is the
//! lumped finite-volume reading: `M dz = -K z + B g`, with `K` the symmetric
//! stiffness, `M` the trapezoid cell masses, and `B` the lumped boundary-length
//! injection on the beam polyline. The clamped beam biharmonic uses reflected
//! ghosts for `v = v' = 0`, which makes it exactly the Galerkin product of the
//! second-difference map with trapezoid weights, hence symmetric positive
//! definite.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::linalg::{BandedLu, CsrMatrix};
use crate::scalar::{lit, Scalar};

/// Scalar field on the full `nx x ny` node grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldOmega<S> {
    pub values: Vec<S>,
    pub nx: usize,
    pub ny: usize,
    pub hx: S,
    pub hy: S,
}

impl<S: Scalar> FieldOmega<S> {
    pub fn zeros(geometry: &DomainGeometry<S>) -> Self {
        Self {
            values: vec![S::zero(); geometry.node_count()],
            nx: geometry.nx,
            ny: geometry.ny,
            hx: geometry.hx,
            hy: geometry.hy,
        }
    }

    pub fn from_fn(geometry: &DomainGeometry<S>, mut f: impl FnMut(S, S) -> S) -> Self {
        let mut field = Self::zeros(geometry);
        for idx in 0..geometry.node_count() {
            let [x, y] = geometry.coords(idx);
            field.values[idx] = f(x, y);
        }
        field
    }

    pub fn matches(&self, geometry: &DomainGeometry<S>) -> bool {
        self.nx == geometry.nx && self.ny == geometry.ny
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> S {
        self.values[j * self.nx + i]
    }
}

/// Scalar field on the beam polyline; only interior nodes are stored, the
/// clamp endpoints are structurally zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldBeam<S> {
    pub values: Vec<S>,
    /// Total polyline node count including the clamp endpoints.
    pub n_full: usize,
    pub hs: S,
}

impl<S: Scalar> FieldBeam<S> {
    pub fn zeros(geometry: &DomainGeometry<S>) -> Self {
        Self {
            values: vec![S::zero(); geometry.beam_interior_count()],
            n_full: geometry.beam_node_count(),
            hs: geometry.hx,
        }
    }

    /// Builds from a function of arclength on interior nodes.
    pub fn from_fn(geometry: &DomainGeometry<S>, mut f: impl FnMut(S) -> S) -> Self {
        let mut field = Self::zeros(geometry);
        for k in 0..field.values.len() {
            field.values[k] = f(geometry.beam_arclength()[k + 1]);
        }
        field
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Values on the full polyline with zeros at the clamp endpoints.
    pub fn padded(&self) -> Vec<S> {
        let mut out = vec![S::zero(); self.n_full];
        out[1..self.n_full - 1].copy_from_slice(&self.values);
        out
    }
}

/// Spaces an operator can map between.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceTag {
    OmegaField,
    BeamField,
    Trace,
}

/// Tagged sparse operator in compressed-row form.
#[derive(Debug, Clone)]
pub struct SparseOperator<S> {
    pub matrix: CsrMatrix<S>,
    pub domain: SpaceTag,
    pub codomain: SpaceTag,
    pub symmetric: bool,
}

/// Interior Laplacian with mixed Neumann data in flux form.
#[derive(Debug)]
pub struct NeumannLaplacian<S> {
    /// Weighted symmetric operator `-K / (hx hy)`; negative semidefinite,
    /// constants in its kernel.
    weighted: SparseOperator<S>,
    /// Stiffness `K` with `z^T K z` the discrete Dirichlet energy.
    stiffness: CsrMatrix<S>,
    /// Lumped cell areas.
    masses: Vec<S>,
    /// Lumped boundary lengths per beam polyline node.
    flux_lengths: Vec<S>,
    /// Grid index per beam polyline node.
    beam_grid: Vec<usize>,
    nx: usize,
    ny: usize,
    hx: S,
    hy: S,
    grounded: OnceLock<BandedLu<S>>,
}

impl<S: Scalar> NeumannLaplacian<S> {
    /// The exported symmetric negative-semidefinite matrix.
    pub fn operator(&self) -> &SparseOperator<S> {
        &self.weighted
    }

    pub fn stiffness(&self) -> &CsrMatrix<S> {
        &self.stiffness
    }

    /// Discrete Dirichlet energy `z^T K z` (the grad-squared integral).
    pub fn dirichlet_energy(&self, z: &[S]) -> S {
        self.stiffness.quadratic_form(z)
    }

    pub fn masses(&self) -> &[S] {
        &self.masses
    }

    /// Mass-weighted inner product over the grid.
    pub fn mass_inner(&self, a: &[S], b: &[S]) -> S {
        a.iter().zip(b).zip(&self.masses).map(|((&u, &v), &m)| u * v * m).sum()
    }

    /// Pointwise Laplacian apply with optional beam-side flux: the classical
    /// ghost-eliminated stencil `M^{-1} (-K z + B g)`.
    pub fn apply_pointwise(&self, z: &[S], flux_gamma0: Option<&[S]>) -> Vec<S> {
        let mut out = self.stiffness.matvec(z);
        for v in &mut out {
            *v = -*v;
        }
        if let Some(g) = flux_gamma0 {
            assert_eq!(g.len(), self.beam_grid.len(), "flux must cover the full polyline");
            for (k, &idx) in self.beam_grid.iter().enumerate() {
                out[idx] = out[idx] + self.flux_lengths[k] * g[k];
            }
        }
        for (v, &m) in out.iter_mut().zip(&self.masses) {
            *v = *v / m;
        }
        out
    }

    /// Mass-weighted integral of the pointwise Laplacian, i.e. the discrete
    /// divergence theorem's volume side.
    pub fn divergence_integral(&self, z: &[S], flux_gamma0: Option<&[S]>) -> S {
        let lap = self.apply_pointwise(z, flux_gamma0);
        self.mass_inner(&lap, &vec![S::one(); lap.len()])
    }

    /// Trapezoid boundary integral of a beam-side flux.
    pub fn flux_integral(&self, g: &[S]) -> S {
        g.iter().zip(&self.flux_lengths).map(|(&gi, &li)| gi * li).sum()
    }

    /// Lumped boundary lengths along the polyline.
    pub fn flux_lengths(&self) -> &[S] {
        &self.flux_lengths
    }

    fn grounded_lu(&self) -> Result<&BandedLu<S>> {
        if let Some(lu) = self.grounded.get() {
            return Ok(lu);
        }
        // Symmetric grounding: clear row and column 0, unit diagonal. For
        // compatible data the solution solves the original singular system
        // exactly; the mean-zero representative is then selected by
        // projection.
        let n = self.stiffness.nrows();
        let mut triplets = Vec::with_capacity(self.stiffness.nnz());
        for (i, j, v) in self.stiffness.triplets() {
            if i == 0 || j == 0 {
                continue;
            }
            triplets.push((i, j, v));
        }
        triplets.push((0, 0, S::one()));
        let grounded = CsrMatrix::from_triplets(n, n, &triplets);
        let lu = grounded.to_banded().lu()?;
        let _ = self.grounded.set(lu);
        Ok(self.grounded.get().expect("just set"))
    }

    /// Harmonic extension of a boundary flux: solves `Delta z = 0` with
    /// `dz/dnu = g` on the beam polyline and zero flux on the rigid wall,
    /// returning the mean-zero representative. A nonzero-mean input is
    /// projected first and flagged.
    pub fn neumann_map(&self, g: &[S]) -> Result<(Vec<S>, bool)> {
        assert_eq!(g.len(), self.beam_grid.len(), "flux must cover the full polyline");
        let total_len: S = self.flux_lengths.iter().copied().sum();
        let mean = self.flux_integral(g) / total_len;
        let scale = g.iter().fold(S::zero(), |m, &v| m.max(v.abs())) + S::one();
        let projected = mean.abs() > lit::<S>(1e-12) * scale;
        let g_used: Vec<S> = g.iter().map(|&v| v - mean).collect();

        let n = self.stiffness.nrows();
        let mut rhs = vec![S::zero(); n];
        for (k, &idx) in self.beam_grid.iter().enumerate() {
            rhs[idx] = rhs[idx] + self.flux_lengths[k] * g_used[k];
        }
        rhs[0] = S::zero();
        let mut z = self.grounded_lu()?.solve(&rhs);
        // Mean-zero projection in the lumped mass inner product.
        let total_mass: S = self.masses.iter().copied().sum();
        let mean_z = self.mass_inner(&z, &vec![S::one(); n]) / total_mass;
        for v in &mut z {
            *v = *v - mean_z;
        }
        Ok((z, projected))
    }
}

/// Assembles the mixed-Neumann Laplacian machinery for a geometry.
pub fn laplacian_neumann<S: Scalar>(geometry: &DomainGeometry<S>) -> NeumannLaplacian<S> {
    let (nx, ny) = (geometry.nx, geometry.ny);
    let n = geometry.node_count();
    let half = lit::<S>(0.5);
    let mut triplets: Vec<(usize, usize, S)> = Vec::with_capacity(5 * n);
    // Horizontal edges (i,j)-(i+1,j): conductance hy*wy/hx.
    for j in 0..ny {
        let wy = if j == 0 || j == ny - 1 { half } else { S::one() };
        let cond = geometry.hy * wy / geometry.hx;
        for i in 0..nx - 1 {
            let a = geometry.node_index(i, j);
            let b = geometry.node_index(i + 1, j);
            triplets.push((a, a, cond));
            triplets.push((b, b, cond));
            triplets.push((a, b, -cond));
            triplets.push((b, a, -cond));
        }
    }
    // Vertical edges (i,j)-(i,j+1): conductance hx*wx/hy.
    for i in 0..nx {
        let wx = if i == 0 || i == nx - 1 { half } else { S::one() };
        let cond = geometry.hx * wx / geometry.hy;
        for j in 0..ny - 1 {
            let a = geometry.node_index(i, j);
            let b = geometry.node_index(i, j + 1);
            triplets.push((a, a, cond));
            triplets.push((b, b, cond));
            triplets.push((a, b, -cond));
            triplets.push((b, a, -cond));
        }
    }
    let stiffness = CsrMatrix::from_triplets(n, n, &triplets);
    let cell = geometry.hx * geometry.hy;
    let weighted_triplets: Vec<(usize, usize, S)> =
        stiffness.triplets().into_iter().map(|(i, j, v)| (i, j, -v / cell)).collect();
    let weighted = SparseOperator {
        matrix: CsrMatrix::from_triplets(n, n, &weighted_triplets),
        domain: SpaceTag::OmegaField,
        codomain: SpaceTag::OmegaField,
        symmetric: true,
    };
    let masses: Vec<S> = (0..n).map(|idx| geometry.lumped_area(idx)).collect();
    let flux_lengths: Vec<S> = (0..geometry.beam_node_count()).map(|k| geometry.beam_lumped_length(k)).collect();
    NeumannLaplacian {
        weighted,
        stiffness,
        masses,
        flux_lengths,
        beam_grid: geometry.beam_nodes().to_vec(),
        nx,
        ny,
        hx: geometry.hx,
        hy: geometry.hy,
        grounded: OnceLock::new(),
    }
}

/// Clamped beam fourth-difference operator on interior polyline nodes.
#[derive(Debug)]
pub struct BeamBiharmonic<S> {
    operator: SparseOperator<S>,
    pub hs: S,
    pub n_full: usize,
}

impl<S: Scalar> BeamBiharmonic<S> {
    pub fn operator(&self) -> &SparseOperator<S> {
        &self.operator
    }

    pub fn interior_count(&self) -> usize {
        self.n_full - 2
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        self.operator.matrix.matvec(v)
    }

    /// Second derivative along arclength at every polyline node, using the
    /// clamp conditions for the endpoint ghosts.
    pub fn second_derivative_all(&self, v: &[S]) -> Vec<S> {
        let m = self.interior_count();
        assert_eq!(v.len(), m);
        let h2 = self.hs * self.hs;
        let two = lit::<S>(2.0);
        let mut out = vec![S::zero(); self.n_full];
        out[0] = two * v[0] / h2;
        out[self.n_full - 1] = two * v[m - 1] / h2;
        for k in 0..m {
            let left = if k == 0 { S::zero() } else { v[k - 1] };
            let right = if k + 1 == m { S::zero() } else { v[k + 1] };
            out[k + 1] = (left - two * v[k] + right) / h2;
        }
        out
    }

    /// Fourth difference at every polyline node including the clamps, with
    /// reflected ghosts `v(-1) = v(1)`, `v(-2) = v(2)`.
    pub fn biharmonic_all(&self, v: &[S]) -> Vec<S> {
        let m = self.interior_count();
        assert_eq!(v.len(), m);
        let h4 = self.hs * self.hs * self.hs * self.hs;
        let full = {
            let mut f = vec![S::zero(); self.n_full];
            f[1..=m].copy_from_slice(v);
            f
        };
        let at = |k: isize| -> S {
            let n = self.n_full as isize;
            if k < 0 {
                full[(-k) as usize]
            } else if k >= n {
                full[(2 * (n - 1) - k) as usize]
            } else {
                full[k as usize]
            }
        };
        let mut out = vec![S::zero(); self.n_full];
        let four = lit::<S>(4.0);
        let six = lit::<S>(6.0);
        for k in 0..self.n_full {
            let ki = k as isize;
            out[k] = (at(ki - 2) - four * at(ki - 1) + six * at(ki) - four * at(ki + 1) + at(ki + 2)) / h4;
        }
        out
    }

    /// Quadratic energy form `sum_k w_k (D2 v)_k (D2 w)_k`, equal to the
    /// trapezoid integral of products of second derivatives. Consistent with
    /// `apply`: `<A v, w>_{hs} = form(v, w)`.
    pub fn energy_form(&self, v: &[S], w: &[S]) -> S {
        let d2v = self.second_derivative_all(v);
        let d2w = self.second_derivative_all(w);
        let half = lit::<S>(0.5);
        let mut acc = S::zero();
        for k in 0..self.n_full {
            let wk = if k == 0 || k + 1 == self.n_full { half } else { S::one() };
            acc = acc + wk * d2v[k] * d2w[k];
        }
        acc * self.hs
    }
}

/// Assembles the clamped biharmonic; needs at least 7 polyline nodes and
/// square cells.
pub fn biharmonic_clamped<S: Scalar>(geometry: &DomainGeometry<S>) -> Result<BeamBiharmonic<S>> {
    let n_full = geometry.beam_node_count();
    if n_full < 7 {
        return Err(Error::BeamTooShort { nodes: n_full });
    }
    let hs = geometry.beam_spacing()?;
    let m = n_full - 2;
    let h4 = hs * hs * hs * hs;
    let mut triplets: Vec<(usize, usize, S)> = Vec::with_capacity(5 * m);
    let put = |trip: &mut Vec<(usize, usize, S)>, r: usize, c: isize, v: f64| {
        if c >= 0 && (c as usize) < m {
            trip.push((r, c as usize, lit::<S>(v)));
        }
    };
    for r in 0..m {
        let ri = r as isize;
        // Base stencil [1, -4, 6, -4, 1]; first and last rows fold the
        // reflected ghost back onto the first interior node (6 -> 7).
        let diag = if r == 0 || r + 1 == m { 7.0 } else { 6.0 };
        put(&mut triplets, r, ri - 2, 1.0);
        put(&mut triplets, r, ri - 1, -4.0);
        put(&mut triplets, r, ri, diag);
        put(&mut triplets, r, ri + 1, -4.0);
        put(&mut triplets, r, ri + 2, 1.0);
    }
    let scaled: Vec<(usize, usize, S)> = triplets.into_iter().map(|(i, j, v)| (i, j, v / h4)).collect();
    let operator = SparseOperator {
        matrix: CsrMatrix::from_triplets(m, m, &scaled),
        domain: SpaceTag::BeamField,
        codomain: SpaceTag::BeamField,
        symmetric: true,
    };
    Ok(BeamBiharmonic { operator, hs, n_full })
}

/// Traces and one-sided normal derivatives of a grid field.
#[derive(Debug, Clone)]
pub struct TraceFlux<S> {
    /// Values along the beam polyline (clamp endpoints included).
    pub gamma0_trace: Vec<S>,
    /// Values along the rigid wall.
    pub gamma1_trace: Vec<S>,
    /// One-sided second-order normal derivative on the polyline; corners
    /// average the two adjoining edges.
    pub gamma0_normal: Vec<S>,
    /// Normal derivative on the rigid wall.
    pub gamma1_normal: Vec<S>,
}

/// Extracts boundary traces and normal derivatives.
pub fn trace_and_flux<S: Scalar>(geometry: &DomainGeometry<S>, field: &FieldOmega<S>) -> TraceFlux<S> {
    assert!(field.matches(geometry), "field shape mismatch");
    let (nx, ny) = (geometry.nx, geometry.ny);
    let three = lit::<S>(3.0);
    let four = lit::<S>(4.0);
    let two = lit::<S>(2.0);
    let half = lit::<S>(0.5);
    // Outward one-sided derivatives on vertical / horizontal edges.
    let outward_x = |i: usize, j: usize| -> S {
        if i == 0 {
            (three * field.get(0, j) - four * field.get(1, j) + field.get(2, j)) / (two * geometry.hx)
        } else {
            (three * field.get(nx - 1, j) - four * field.get(nx - 2, j) + field.get(nx - 3, j)) / (two * geometry.hx)
        }
    };
    let outward_y = |i: usize, j: usize| -> S {
        if j == 0 {
            (three * field.get(i, 0) - four * field.get(i, 1) + field.get(i, 2)) / (two * geometry.hy)
        } else {
            (three * field.get(i, ny - 1) - four * field.get(i, ny - 2) + field.get(i, ny - 3)) / (two * geometry.hy)
        }
    };
    let mut gamma0_trace = Vec::with_capacity(geometry.beam_node_count());
    let mut gamma0_normal = Vec::with_capacity(geometry.beam_node_count());
    for &idx in geometry.beam_nodes() {
        let (i, j) = geometry.node_ij(idx);
        gamma0_trace.push(field.values[idx]);
        let top = j == ny - 1;
        let side = i == 0 || i == nx - 1;
        // Polyline corners average the two one-sided edge normals.
        let normal = if top && side {
            (outward_x(i, j) + outward_y(i, j)) * half
        } else if side {
            outward_x(i, j)
        } else {
            outward_y(i, j)
        };
        gamma0_normal.push(normal);
    }
    let mut gamma1_trace = Vec::with_capacity(nx);
    let mut gamma1_normal = Vec::with_capacity(nx);
    for i in 0..nx {
        gamma1_trace.push(field.get(i, 0));
        gamma1_normal.push(outward_y(i, 0));
    }
    TraceFlux { gamma0_trace, gamma1_trace, gamma0_normal, gamma1_normal }
}

/// Gradient of a grid field: centered differences inside, one-sided
/// second-order at the boundary.
pub fn gradient<S: Scalar>(geometry: &DomainGeometry<S>, field: &FieldOmega<S>) -> (FieldOmega<S>, FieldOmega<S>) {
    let (nx, ny) = (geometry.nx, geometry.ny);
    let two = lit::<S>(2.0);
    let three = lit::<S>(3.0);
    let four = lit::<S>(4.0);
    let mut gx = FieldOmega::zeros(geometry);
    let mut gy = FieldOmega::zeros(geometry);
    for j in 0..ny {
        for i in 0..nx {
            let idx = geometry.node_index(i, j);
            gx.values[idx] = if i == 0 {
                (-three * field.get(0, j) + four * field.get(1, j) - field.get(2, j)) / (two * geometry.hx)
            } else if i == nx - 1 {
                (three * field.get(nx - 1, j) - four * field.get(nx - 2, j) + field.get(nx - 3, j)) / (two * geometry.hx)
            } else {
                (field.get(i + 1, j) - field.get(i - 1, j)) / (two * geometry.hx)
            };
            gy.values[idx] = if j == 0 {
                (-three * field.get(i, 0) + four * field.get(i, 1) - field.get(i, 2)) / (two * geometry.hy)
            } else if j == ny - 1 {
                (three * field.get(i, ny - 1) - four * field.get(i, ny - 2) + field.get(i, ny - 3)) / (two * geometry.hy)
            } else {
                (field.get(i, j + 1) - field.get(i, j - 1)) / (two * geometry.hy)
            };
        }
    }
    (gx, gy)
}

/// Identification between beam polyline nodes and grid boundary nodes.
#[derive(Debug, Clone)]
pub struct BeamTransfer {
    /// Grid index of each polyline node.
    pub beam_to_grid: Vec<usize>,
}

impl BeamTransfer {
    /// Gathers a grid field onto the polyline.
    pub fn gather<S: Scalar>(&self, grid: &[S]) -> Vec<S> {
        self.beam_to_grid.iter().map(|&idx| grid[idx]).collect()
    }

    /// Scatters polyline values into a zero grid field.
    pub fn scatter<S: Scalar>(&self, beam: &[S], n_grid: usize) -> Vec<S> {
        assert_eq!(beam.len(), self.beam_to_grid.len());
        let mut out = vec![S::zero(); n_grid];
        for (k, &idx) in self.beam_to_grid.iter().enumerate() {
            out[idx] = beam[k];
        }
        out
    }
}

/// Builds the transfer for `beam_nodes` polyline nodes; errors on a count
/// mismatch with the geometry.
pub fn beam_transfer<S: Scalar>(geometry: &DomainGeometry<S>, beam_nodes: usize) -> Result<BeamTransfer> {
    if beam_nodes != geometry.beam_node_count() {
        return Err(Error::MismatchedNodeCounts { beam: beam_nodes, boundary: geometry.beam_node_count() });
    }
    Ok(BeamTransfer { beam_to_grid: geometry.beam_nodes().to_vec() })
}
