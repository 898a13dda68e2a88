//! Finite-difference grids for intervals and radial balls, with the discrete
//! Dirichlet Laplacian, tridiagonal solves, quadrature and boundary fluxes.
//!
//! Only interior nodes are stored; the homogeneous Dirichlet boundary value is
//! implicit. Radial grids are cell-centered (`r_i = (i - 1/2) h`) so the
//! symmetry condition `u'(0) = 0` is encoded without a node at the origin and
//! the Dirichlet ghost node falls exactly on `r = R`.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Domain shape of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    /// Open interval `(x0, x1)`.
    Interval { x0: f64, x1: f64 },
    /// Ball of radius `radius` in `R^dim`, discretized along the radius.
    Radial { radius: f64, dim: u32 },
}

/// Uniform interior-node discretization of an interval or a radial ball.
#[derive(Debug, Clone)]
pub struct Grid {
    kind: GridKind,
    n: usize,
    h: f64,
    nodes: Vec<f64>,
    op: Tridiag,
    quad: Vec<f64>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.n == other.n
    }
}

impl Grid {
    /// Interval `(x0, x1)` with `n` interior nodes at `x0 + i h`, `h = (x1-x0)/(n+1)`.
    pub fn interval(x0: f64, x1: f64, n: usize) -> Result<Arc<Grid>> {
        if !(x1 > x0) || !x0.is_finite() || !x1.is_finite() {
            return Err(Error::InvalidGrid(format!("bad interval ({x0}, {x1})")));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!("n_interior = {n} < 3")));
        }
        let h = (x1 - x0) / (n + 1) as f64;
        let nodes: Vec<f64> = (1..=n).map(|i| x0 + i as f64 * h).collect();
        let inv_h2 = 1.0 / (h * h);
        let op = Tridiag {
            sub: std::iter::once(0.0).chain(std::iter::repeat(-inv_h2)).take(n).collect(),
            diag: vec![2.0 * inv_h2; n],
            sup: std::iter::repeat(-inv_h2).take(n - 1).chain(std::iter::once(0.0)).collect(),
        };
        // Trapezoid with linearly extrapolated end cells; exact for affine fields.
        let mut quad = vec![h; n];
        quad[0] += h;
        quad[1] -= 0.5 * h;
        quad[n - 1] += h;
        quad[n - 2] -= 0.5 * h;
        Ok(Arc::new(Grid { kind: GridKind::Interval { x0, x1 }, n, h, nodes, op, quad }))
    }

    /// Radial ball of radius `R` in `R^dim`, cell-centered nodes `r_i = (i - 1/2) h`
    /// with `h = R/(n + 1/2)` so the Dirichlet ghost node sits exactly at `r = R`.
    pub fn radial(radius: f64, dim: u32, n: usize) -> Result<Arc<Grid>> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidGrid(format!("bad radius {radius}")));
        }
        if dim < 1 {
            return Err(Error::InvalidGrid("dim must be >= 1".into()));
        }
        if n < 3 {
            return Err(Error::InvalidGrid(format!("n_interior = {n} < 3")));
        }
        let h = radius / (n as f64 + 0.5);
        let nodes: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) * h).collect();
        let inv_h2 = 1.0 / (h * h);
        let nm1 = (dim - 1) as f64;
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        for i in 0..n {
            let c = nm1 / (2.0 * h * nodes[i]);
            let lower = -inv_h2 + c;
            diag[i] = 2.0 * inv_h2;
            if i == 0 {
                // symmetry closure u_0 := u_1 folds the lower coefficient in
                diag[i] += lower;
            } else {
                sub[i] = lower;
            }
            if i + 1 < n {
                sup[i] = -inv_h2 - c;
            }
        }
        let omega = sphere_area(dim);
        let quad: Vec<f64> = nodes.iter().map(|&r| omega * r.powi(dim as i32 - 1) * h).collect();
        let op = Tridiag { sub, diag, sup };
        Ok(Arc::new(Grid { kind: GridKind::Radial { radius, dim }, n, h, nodes, op, quad }))
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn n_interior(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Interior node coordinates (x for intervals, r for radial grids).
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Domain endpoints as a 1D range: `(x0, x1)` or `(0, R)`.
    pub fn domain(&self) -> (f64, f64) {
        match self.kind {
            GridKind::Interval { x0, x1 } => (x0, x1),
            GridKind::Radial { radius, .. } => (0.0, radius),
        }
    }

    /// Distance of node `i` to the Dirichlet boundary.
    pub fn boundary_distance(&self, i: usize) -> f64 {
        match self.kind {
            GridKind::Interval { x0, x1 } => (self.nodes[i] - x0).min(x1 - self.nodes[i]),
            GridKind::Radial { radius, .. } => radius - self.nodes[i],
        }
    }

    /// The assembled `-Laplacian` as a tridiagonal operator.
    pub fn operator(&self) -> &Tridiag {
        &self.op
    }

    pub(crate) fn field(self: &Arc<Self>, values: Vec<f64>) -> Field {
        assert_eq!(values.len(), self.n);
        Field { grid: Arc::clone(self), values }
    }

    /// Field with all interior values zero.
    pub fn zero_field(self: &Arc<Self>) -> Field {
        self.field(vec![0.0; self.n])
    }

    /// Field sampled from a function of the node coordinate.
    pub fn field_from_fn(self: &Arc<Self>, f: impl Fn(f64) -> f64) -> Field {
        self.field(self.nodes.iter().map(|&x| f(x)).collect())
    }

    /// `-Δu` by the second-order stencil with zero Dirichlet extension.
    pub fn laplacian_apply(&self, u: &Field) -> Result<Field> {
        self.check(u, "laplacian_apply")?;
        Ok(Field { grid: Arc::clone(&u.grid), values: self.op.apply(&u.values) })
    }

    /// Solves `-Δu = f` by tridiagonal elimination; pivots are asserted positive.
    pub fn solve_linear(&self, f: &Field) -> Result<Field> {
        self.check(f, "solve_linear")?;
        let values = self.op.solve_spd(&f.values)?;
        Ok(Field { grid: Arc::clone(&f.grid), values })
    }

    /// Quadrature of a field over the domain (with the surface measure factor
    /// `omega_{N-1} r^{N-1}` on radial grids).
    pub fn integrate(&self, u: &Field) -> Result<f64> {
        self.check(u, "integrate")?;
        Ok(self.quad.iter().zip(&u.values).map(|(w, v)| w * v).sum())
    }

    /// Per-node quadrature weights.
    pub fn quad_weights(&self) -> &[f64] {
        &self.quad
    }

    /// One-sided second-order outward normal derivative estimates
    /// (two values for intervals, a single value at `r = R` for radial grids).
    pub fn boundary_flux(&self, u: &Field) -> Result<Vec<f64>> {
        self.check(u, "boundary_flux")?;
        let v = &u.values;
        let n = self.n;
        let h = self.h;
        Ok(match self.kind {
            GridKind::Interval { .. } => {
                let left = -(4.0 * v[0] - v[1]) / (2.0 * h);
                let right = (v[n - 2] - 4.0 * v[n - 1]) / (2.0 * h);
                vec![left, right]
            }
            GridKind::Radial { .. } => {
                // quadratic fit through (R, 0), (R - h/2, u_n), (R - 3h/2, u_{n-1})
                vec![(v[n - 2] - 9.0 * v[n - 1]) / (3.0 * h)]
            }
        })
    }

    /// Discrete Dirichlet form `∫ |∇u|²` (forward differences, zero extension).
    pub fn dirichlet_form(&self, u: &Field) -> Result<f64> {
        self.check(u, "dirichlet_form")?;
        let v = &u.values;
        let n = self.n;
        let h = self.h;
        match self.kind {
            GridKind::Interval { .. } => {
                let mut acc = v[0] * v[0];
                for i in 1..n {
                    let d = v[i] - v[i - 1];
                    acc += d * d;
                }
                acc += v[n - 1] * v[n - 1];
                Ok(acc / h)
            }
            GridKind::Radial { dim, .. } => {
                let omega = sphere_area(dim);
                let mut acc = 0.0;
                for i in 1..=n {
                    let d = if i < n { v[i] - v[i - 1] } else { -v[n - 1] };
                    let face = i as f64 * h;
                    acc += d * d / h * face.powi(dim as i32 - 1);
                }
                Ok(omega * acc)
            }
        }
    }

    fn check(&self, u: &Field, what: &'static str) -> Result<()> {
        if u.grid.as_ref() == self {
            Ok(())
        } else {
            Err(Error::GridMismatch(what))
        }
    }
}

/// Surface area of the unit sphere `S^{N-1}` in `R^N`.
pub fn sphere_area(dim: u32) -> f64 {
    let n = dim as f64;
    2.0 * std::f64::consts::PI.powf(n / 2.0) / gamma_half(dim)
}

/// `Γ(N/2)` for integer `N >= 1`.
fn gamma_half(dim: u32) -> f64 {
    if dim % 2 == 0 {
        let k = dim / 2;
        (1..k).map(|j| j as f64).product::<f64>()
    } else {
        // Γ(k + 1/2) = (2k)! √π / (4^k k!) with k = (dim-1)/2
        let k = (dim - 1) / 2;
        let mut acc = std::f64::consts::PI.sqrt();
        for j in 0..k {
            acc *= j as f64 + 0.5;
        }
        acc
    }
}

/// Tridiagonal operator; `sub[0]` and `sup[n-1]` are unused and zero.
#[derive(Debug, Clone)]
pub struct Tridiag {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl Tridiag {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.sub[i] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.sup[i] * v[i + 1];
            }
            out[i] = acc;
        }
        out
    }

    /// Principal sub-block on `range` (zero Dirichlet coupling outside it).
    pub fn block(&self, range: std::ops::Range<usize>) -> Tridiag {
        let mut sub: Vec<f64> = self.sub[range.clone()].to_vec();
        let mut sup: Vec<f64> = self.sup[range.clone()].to_vec();
        if !sub.is_empty() {
            sub[0] = 0.0;
            let last = sup.len() - 1;
            sup[last] = 0.0;
        }
        Tridiag { sub, diag: self.diag[range].to_vec(), sup }
    }

    /// Copy with `shift` added to the diagonal.
    pub fn with_diag_shift(&self, shift: &[f64]) -> Tridiag {
        let mut out = self.clone();
        for (d, s) in out.diag.iter_mut().zip(shift) {
            *d += s;
        }
        out
    }

    /// Thomas elimination, asserting strictly positive pivots (valid for the
    /// Dirichlet Laplacian and its nonnegative diagonal shifts).
    pub fn solve_spd(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        self.solve_impl(rhs, true)
    }

    /// Thomas elimination for general (possibly indefinite) tridiagonal systems.
    pub fn solve_general(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        self.solve_impl(rhs, false)
    }

    fn solve_impl(&self, rhs: &[f64], require_positive: bool) -> Result<Vec<f64>> {
        let n = self.len();
        assert_eq!(rhs.len(), n);
        let scale = self.diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(1e-300);
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0];
        if require_positive && pivot <= 0.0 {
            return Err(Error::NonPositivePivot { row: 0, pivot });
        }
        if pivot.abs() < 1e-300 * scale {
            return Err(Error::SingularSystem { row: 0 });
        }
        c[0] = self.sup[0] / pivot;
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.sub[i] * c[i - 1];
            if require_positive && pivot <= 0.0 {
                return Err(Error::NonPositivePivot { row: i, pivot });
            }
            if pivot.abs() < 1e-300 * scale {
                return Err(Error::SingularSystem { row: i });
            }
            if i + 1 < n {
                c[i] = self.sup[i] / pivot;
            }
            d[i] = (rhs[i] - self.sub[i] * d[i - 1]) / pivot;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        Ok(x)
    }
}

/// A discrete function on the interior nodes of a [`Grid`], extended by zero
/// on the Dirichlet boundary.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Field> {
        if values.len() != grid.n_interior() {
            return Err(Error::GridMismatch("field length"));
        }
        Ok(Field { grid, values })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// `max_i |self_i - other_i|`.
    pub fn sup_distance(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field { grid: Arc::clone(&self.grid), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Field {
        Field {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Field {
        self.map(|v| c * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn laplacian_exact_on_quadratics() {
        let g = Grid::interval(0.0, 1.0, 57).unwrap();
        let u = g.field_from_fn(|x| x * (1.0 - x));
        let lap = g.laplacian_apply(&u).unwrap();
        for &v in lap.values() {
            assert!((v - 2.0).abs() < 1e-10, "got {v}");
        }
    }

    #[test]
    fn radial_laplacian_exact_on_quadratics() {
        for dim in [1u32, 2, 3, 4] {
            let g = Grid::radial(1.0, dim, 41).unwrap();
            let u = g.field_from_fn(|r| 1.0 - r * r);
            let lap = g.laplacian_apply(&u).unwrap();
            for &v in lap.values() {
                assert!((v - 2.0 * dim as f64).abs() < 1e-9, "dim {dim}: got {v}");
            }
        }
    }

    #[test]
    fn laplacian_second_order_on_sine() {
        let err = |n: usize| {
            let g = Grid::interval(0.0, PI, n).unwrap();
            let u = g.field_from_fn(f64::sin);
            let lap = g.laplacian_apply(&u).unwrap();
            lap.values()
                .iter()
                .zip(g.nodes())
                .fold(0.0f64, |m, (&v, &x)| m.max((v - x.sin()).abs()))
        };
        let ratio = err(200) / err(401);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn solve_exact_on_quadratic_rhs() {
        let g = Grid::interval(0.0, 1.0, 100).unwrap();
        let f = g.field_from_fn(|_| 2.0);
        let u = g.solve_linear(&f).unwrap();
        let exact = g.field_from_fn(|x| x * (1.0 - x));
        assert!(u.sup_distance(&exact) < 1e-13);
    }

    #[test]
    fn radial_solve_exact_on_constant_rhs() {
        let g = Grid::radial(1.0, 3, 80).unwrap();
        let f = g.field_from_fn(|_| 6.0);
        let u = g.solve_linear(&f).unwrap();
        let exact = g.field_from_fn(|r| 1.0 - r * r);
        assert!(u.sup_distance(&exact) < 1e-12, "err {}", u.sup_distance(&exact));
    }

    #[test]
    fn solve_manufactured_sine_second_order() {
        let err = |n: usize| {
            let g = Grid::interval(0.0, PI, n).unwrap();
            let f = g.field_from_fn(f64::sin);
            let u = g.solve_linear(&f).unwrap();
            u.sup_distance(&g.field_from_fn(f64::sin))
        };
        let (e1, e2) = (err(500), err(1001));
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn radial_solve_second_order_on_smooth_solution() {
        // u = cos(pi r / 2) on the unit ball in R^3; -Δu = (pi/2)^2 u + (2/r)(pi/2) sin(pi r/2)
        let rhs = |r: f64| {
            let k = PI / 2.0;
            k * k * (k * r).cos() + 2.0 / r * k * (k * r).sin()
        };
        let err = |n: usize| {
            let g = Grid::radial(1.0, 3, n).unwrap();
            let f = g.field_from_fn(rhs);
            let u = g.solve_linear(&f).unwrap();
            u.sup_distance(&g.field_from_fn(|r| (PI / 2.0 * r).cos()))
        };
        let ratio = err(300) / err(601);
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn integrate_constant_and_sine() {
        let g = Grid::interval(0.0, 1.0, 500).unwrap();
        let one = g.field_from_fn(|_| 1.0);
        assert!((g.integrate(&one).unwrap() - 1.0).abs() < 1e-10);

        let g = Grid::interval(0.0, PI, 500).unwrap();
        let s = g.field_from_fn(f64::sin);
        let h = g.spacing();
        assert!((g.integrate(&s).unwrap() - 2.0).abs() < h * h);
    }

    #[test]
    fn integrate_ball_volume() {
        let g = Grid::radial(1.0, 3, 400).unwrap();
        let one = g.field_from_fn(|_| 1.0);
        let vol = g.integrate(&one).unwrap();
        let h = g.spacing();
        assert!((vol - 4.0 * PI / 3.0).abs() < 4.0 * h * h, "vol {vol}");
    }

    #[test]
    fn boundary_flux_examples() {
        let g = Grid::interval(0.0, 1.0, 200).unwrap();
        let u = g.field_from_fn(|x| x * (1.0 - x));
        let fl = g.boundary_flux(&u).unwrap();
        assert!((fl[0] + 1.0).abs() < 1e-10 && (fl[1] + 1.0).abs() < 1e-10, "{fl:?}");

        let g = Grid::interval(0.0, PI, 400).unwrap();
        let u = g.field_from_fn(f64::sin);
        let fl = g.boundary_flux(&u).unwrap();
        let h2 = g.spacing() * g.spacing();
        assert!((fl[0] + 1.0).abs() < 4.0 * h2 && (fl[1] + 1.0).abs() < 4.0 * h2, "{fl:?}");

        let g = Grid::interval(0.0, 1.0, 400).unwrap();
        let u = g.field_from_fn(|x| x * (1.0 - x) * (1.0 - x));
        let fl = g.boundary_flux(&u).unwrap();
        let h2 = g.spacing() * g.spacing();
        assert!((fl[0] + 1.0).abs() < 10.0 * h2, "{fl:?}");
        assert!(fl[1].abs() < 10.0 * h2, "{fl:?}");

        let g = Grid::radial(1.0, 3, 200).unwrap();
        let u = g.field_from_fn(|r| 1.0 - r * r);
        let fl = g.boundary_flux(&u).unwrap();
        assert!((fl[0] + 2.0).abs() < 1e-9, "{fl:?}");
    }

    #[test]
    fn dirichlet_form_matches_operator_pairing() {
        // sum_i u_i (A u)_i * h equals the forward-difference form on intervals
        let g = Grid::interval(0.0, 1.0, 64).unwrap();
        let u = g.field_from_fn(|x| (3.1 * x).sin() * x * (1.0 - x));
        let au = g.laplacian_apply(&u).unwrap();
        let pair: f64 =
            u.values().iter().zip(au.values()).map(|(a, b)| a * b).sum::<f64>() * g.spacing();
        let form = g.dirichlet_form(&u).unwrap();
        assert!((pair - form).abs() < 1e-10 * form.abs().max(1.0), "{pair} vs {form}");
    }

    proptest! {
        #[test]
        fn maximum_principle_interval(values in proptest::collection::vec(0.0f64..5.0, 40)) {
            let g = Grid::interval(-1.0, 2.0, 40).unwrap();
            let f = Field::new(Arc::clone(&g), values).unwrap();
            let u = g.solve_linear(&f).unwrap();
            prop_assert!(u.min_value() >= -1e-12);
        }

        #[test]
        fn maximum_principle_radial(values in proptest::collection::vec(0.0f64..5.0, 40)) {
            let g = Grid::radial(2.0, 3, 40).unwrap();
            let f = Field::new(Arc::clone(&g), values).unwrap();
            let u = g.solve_linear(&f).unwrap();
            prop_assert!(u.min_value() >= -1e-12);
        }

        #[test]
        fn solve_inverts_laplacian(values in proptest::collection::vec(-3.0f64..3.0, 50)) {
            for g in [Grid::interval(0.0, 2.0, 50).unwrap(), Grid::radial(1.5, 2, 50).unwrap()] {
                let u = Field::new(Arc::clone(&g), values.clone()).unwrap();
                let back = g.solve_linear(&g.laplacian_apply(&u).unwrap()).unwrap();
                let rel = back.sup_distance(&u) / u.sup_norm().max(1e-30);
                prop_assert!(rel < 1e-10, "rel {}", rel);
            }
        }
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let g1 = Grid::interval(0.0, 1.0, 10).unwrap();
        let g2 = Grid::interval(0.0, 1.0, 11).unwrap();
        let u = g2.zero_field();
        assert!(matches!(g1.laplacian_apply(&u), Err(Error::GridMismatch(_))));
    }
}
