//! Root-system data for the rank-two simple Lie algebras A2, C2 and G2.
//!
//! Two coordinate systems are used throughout the crate:
//!
//! * weights `λ` are written in the basis of fundamental weights `ω1, ω2`
//!   ([`WeightCoords`]);
//! * points `x` of the torus are written in the basis of fundamental
//!   coweights `ω1∨, ω2∨` ([`PointCoords`]).
//!
//! With the Cartan matrix `C_ij = ⟨α_i, α_j∨⟩` the simple root `α_i` has
//! ω-coordinates equal to row `i` of `C`, the simple coroot `α_i∨` has
//! ω∨-coordinates equal to column `i` of `C`, and the natural pairing is
//! `⟨λ, x⟩ = λᵀ C⁻¹ x`.
//!
//! | algebra | Cartan matrix      | marks | dual marks | det |
//! |---------|--------------------|-------|------------|-----|
//! | A2      | `[[2,-1],[-1,2]]`  | (1,1) | (1,1)      | 3   |
//! | C2      | `[[2,-1],[-2,2]]`  | (2,1) | (1,2)      | 2   |
//! | G2      | `[[2,-3],[-1,2]]`  | (2,3) | (3,2)      | 1   |
//!
//! In C2 the first simple root is short, in G2 the first simple root is long.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = [[i64; 2]; 2];

const FOLD_ITERATION_CAP: usize = 10_000;
const FOLD_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraId {
    A2,
    C2,
    G2,
}

impl AlgebraId {
    pub const ALL: [AlgebraId; 3] = [AlgebraId::A2, AlgebraId::C2, AlgebraId::G2];

    pub fn data(self) -> AlgebraData {
        algebra_data(self)
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            AlgebraId::A2 => "A2",
            AlgebraId::C2 => "C2",
            AlgebraId::G2 => "G2",
        };
        f.write_str(name)
    }
}

impl FromStr for AlgebraId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a2" => Ok(AlgebraId::A2),
            "c2" => Ok(AlgebraId::C2),
            "g2" => Ok(AlgebraId::G2),
            other => Err(Error::Parse(format!("unknown algebra '{other}'"))),
        }
    }
}

/// Static description of one rank-two root system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraData {
    pub id: AlgebraId,
    pub cartan: Mat2,
    pub cartan_inv: [[Rational64; 2]; 2],
    pub marks: [i64; 2],
    pub dual_marks: [i64; 2],
    pub weyl_order: usize,
    pub even_order: usize,
    pub cartan_det: i64,
    /// `⟨α_i, α_i⟩ / 2`, with long roots normalized to 1.
    pub root_half_norms: [Rational64; 2],
}

pub fn algebra_data(id: AlgebraId) -> AlgebraData {
    let r = |n: i64, d: i64| Rational64::new(n, d);
    let (cartan, marks, dual_marks, weyl_order, halves) = match id {
        AlgebraId::A2 => ([[2, -1], [-1, 2]], [1, 1], [1, 1], 6, [r(1, 1), r(1, 1)]),
        AlgebraId::C2 => ([[2, -1], [-2, 2]], [2, 1], [1, 2], 8, [r(1, 2), r(1, 1)]),
        AlgebraId::G2 => ([[2, -3], [-1, 2]], [2, 3], [3, 2], 12, [r(1, 1), r(1, 3)]),
    };
    let det = det2(&cartan);
    let cartan_inv = [
        [r(cartan[1][1], det), r(-cartan[0][1], det)],
        [r(-cartan[1][0], det), r(cartan[0][0], det)],
    ];
    AlgebraData {
        id,
        cartan,
        cartan_inv,
        marks,
        dual_marks,
        weyl_order,
        even_order: weyl_order / 2,
        cartan_det: det,
        root_half_norms: halves,
    }
}

impl AlgebraData {
    /// `det(C) · C⁻¹`, an integer matrix.
    pub fn adjugate(&self) -> Mat2 {
        let c = &self.cartan;
        [[c[1][1], -c[0][1]], [-c[1][0], c[0][0]]]
    }

    /// Highest root `ξ = m1 α1 + m2 α2` in ω-coordinates.
    pub fn highest_root(&self) -> [i64; 2] {
        let c = &self.cartan;
        let m = self.marks;
        [m[0] * c[0][0] + m[1] * c[1][0], m[0] * c[0][1] + m[1] * c[1][1]]
    }

    /// Coroot of the highest root, `2ξ/⟨ξ,ξ⟩`, in ω∨-coordinates.
    ///
    /// Its j-th coordinate is `⟨α_j, ξ∨⟩ = ⟨α_j, α_j⟩/2 · ⟨ξ, α_j∨⟩`.
    pub fn highest_coroot(&self) -> [i64; 2] {
        let xi = self.highest_root();
        let coord = |j: usize| {
            let v = self.root_half_norms[j] * Rational64::from_integer(xi[j]);
            assert!(v.is_integer(), "highest coroot off the coweight lattice");
            v.to_integer()
        };
        [coord(0), coord(1)]
    }

    /// Simple coroot `α_i∨` (i ∈ {1,2}) in ω∨-coordinates: column i of C.
    pub fn simple_coroot(&self, i: usize) -> [i64; 2] {
        assert!(i == 1 || i == 2, "simple root index must be 1 or 2");
        [self.cartan[0][i - 1], self.cartan[1][i - 1]]
    }

    /// Simple root `α_i` (i ∈ {1,2}) in ω-coordinates: row i of C.
    pub fn simple_root(&self, i: usize) -> [i64; 2] {
        assert!(i == 1 || i == 2, "simple root index must be 1 or 2");
        self.cartan[i - 1]
    }

    /// Gram matrix `⟨ω_i∨, ω_j∨⟩` of the coweight basis, for Euclidean geometry.
    pub fn coweight_gram(&self) -> [[f64; 2]; 2] {
        // ⟨ω_i∨, ω_j∨⟩ = (C⁻¹)_ij / d_i where d_i = ⟨α_i, α_i⟩/2
        let mut g = [[0.0; 2]; 2];
        for (i, row) in g.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let q = self.cartan_inv[i][j] / self.root_half_norms[i];
                *v = ratio_to_f64(q);
            }
        }
        g
    }
}

pub(crate) fn ratio_to_f64(q: Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub(crate) fn det2(m: &Mat2) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub(crate) fn mat_vec(a: &Mat2, v: [i64; 2]) -> [i64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

fn mat_vec_f64(a: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [
        a[0][0] as f64 * v[0] + a[0][1] as f64 * v[1],
        a[1][0] as f64 * v[0] + a[1][1] as f64 * v[1],
    ]
}

/// Weight `λ1 ω1 + λ2 ω2`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightCoords(pub [f64; 2]);

/// Point `x1 ω1∨ + x2 ω2∨`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct PointCoords(pub [f64; 2]);

impl From<[i64; 2]> for WeightCoords {
    fn from(v: [i64; 2]) -> Self {
        WeightCoords([v[0] as f64, v[1] as f64])
    }
}

impl std::ops::Add for PointCoords {
    type Output = PointCoords;
    fn add(self, rhs: PointCoords) -> PointCoords {
        PointCoords([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1]])
    }
}

impl std::ops::Sub for PointCoords {
    type Output = PointCoords;
    fn sub(self, rhs: PointCoords) -> PointCoords {
        PointCoords([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1]])
    }
}

impl std::ops::Neg for PointCoords {
    type Output = PointCoords;
    fn neg(self) -> PointCoords {
        PointCoords([-self.0[0], -self.0[1]])
    }
}

/// One element of a Weyl group.
///
/// `weight_matrix` acts on ω-coordinates. `point_matrix` is the contragredient
/// action on ω∨-coordinates, `C · A⁻ᵀ · C⁻¹`, which keeps `⟨wλ, wx⟩ = ⟨λ, x⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    weight_matrix: Mat2,
    point_matrix: Mat2,
    det: i64,
}

impl WeylElement {
    pub fn identity() -> Self {
        WeylElement {
            weight_matrix: [[1, 0], [0, 1]],
            point_matrix: [[1, 0], [0, 1]],
            det: 1,
        }
    }

    /// Simple reflection `r_i`, i ∈ {1,2}.
    pub fn simple_reflection(i: usize, data: &AlgebraData) -> Self {
        let root = data.simple_root(i);
        let coroot = data.simple_coroot(i);
        let k = i - 1;
        let mut a = [[1, 0], [0, 1]];
        let mut b = [[1, 0], [0, 1]];
        for j in 0..2 {
            a[j][k] -= root[j];
            b[j][k] -= coroot[j];
        }
        WeylElement {
            weight_matrix: a,
            point_matrix: b,
            det: -1,
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.weight_matrix
    }

    pub fn point_matrix(&self) -> &Mat2 {
        &self.point_matrix
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn is_even(&self) -> bool {
        self.det == 1
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            weight_matrix: mat_mul(&self.weight_matrix, &other.weight_matrix),
            point_matrix: mat_mul(&self.point_matrix, &other.point_matrix),
            det: self.det * other.det,
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let inv = |m: &Mat2| {
            // det = ±1, so the adjugate divided by det is integral
            let d = det2(m);
            [[m[1][1] * d, -m[0][1] * d], [-m[1][0] * d, m[0][0] * d]]
        };
        WeylElement {
            weight_matrix: inv(&self.weight_matrix),
            point_matrix: inv(&self.point_matrix),
            det: self.det,
        }
    }

    pub fn act_weight(&self, lambda: WeightCoords) -> WeightCoords {
        WeightCoords(mat_vec_f64(&self.weight_matrix, lambda.0))
    }

    pub fn act_point(&self, x: PointCoords) -> PointCoords {
        PointCoords(mat_vec_f64(&self.point_matrix, x.0))
    }

    pub fn act_weight_lattice(&self, lambda: [i64; 2]) -> [i64; 2] {
        mat_vec(&self.weight_matrix, lambda)
    }

    pub fn act_point_lattice(&self, s: [i64; 2]) -> [i64; 2] {
        mat_vec(&self.point_matrix, s)
    }
}

/// `r_i λ = λ − λ_i α_i` in ω-coordinates.
pub fn simple_reflection(i: usize, lambda: WeightCoords, data: &AlgebraData) -> WeightCoords {
    let root = data.simple_root(i);
    let li = lambda.0[i - 1];
    WeightCoords([lambda.0[0] - li * root[0] as f64, lambda.0[1] - li * root[1] as f64])
}

/// A finite Weyl group (or subgroup) as an explicit element list.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
}

impl WeylGroup {
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, WeylElement> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.elements.contains(w)
    }

    /// Elements of determinant +1.
    pub fn even_subgroup(&self) -> WeylGroup {
        WeylGroup {
            elements: self.elements.iter().copied().filter(WeylElement::is_even).collect(),
        }
    }
}

/// Closure of `{r1, r2}` under composition, in breadth-first order from the identity.
pub fn generate_weyl_group(data: &AlgebraData) -> WeylGroup {
    let gens = [
        WeylElement::simple_reflection(1, data),
        WeylElement::simple_reflection(2, data),
    ];
    let mut elements = vec![WeylElement::identity()];
    let mut seen: HashSet<WeylElement> = elements.iter().copied().collect();
    let mut head = 0;
    let mut compositions = 0;
    let budget = data.weyl_order * data.weyl_order;
    while head < elements.len() {
        let w = elements[head];
        head += 1;
        for g in &gens {
            compositions += 1;
            assert!(
                compositions <= budget,
                "Weyl group of {} did not close within {budget} compositions",
                data.id
            );
            let next = g.compose(&w);
            if seen.insert(next) {
                elements.push(next);
            }
        }
    }
    assert_eq!(elements.len(), data.weyl_order, "wrong Weyl group order for {}", data.id);
    WeylGroup { elements }
}

/// Cached full Weyl group of an algebra.
pub fn weyl_group(id: AlgebraId) -> &'static WeylGroup {
    static GROUPS: [OnceLock<WeylGroup>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    GROUPS[id as usize].get_or_init(|| generate_weyl_group(&algebra_data(id)))
}

/// Cached even Weyl group of an algebra.
pub fn even_weyl_group(id: AlgebraId) -> &'static WeylGroup {
    static GROUPS: [OnceLock<WeylGroup>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    GROUPS[id as usize].get_or_init(|| weyl_group(id).even_subgroup())
}

/// `⟨λ, x⟩ = λᵀ C⁻¹ x`.
pub fn pairing(lambda: WeightCoords, x: PointCoords, data: &AlgebraData) -> f64 {
    let adj = data.adjugate();
    let v = mat_vec_f64(&adj, x.0);
    (lambda.0[0] * v[0] + lambda.0[1] * v[1]) / data.cartan_det as f64
}

/// Exact pairing of an integral weight with the grid point `s / m`.
pub fn pairing_exact(lambda: [i64; 2], s: [i64; 2], m: u32, data: &AlgebraData) -> Rational64 {
    Rational64::new(
        phase_numerator(lambda, s, data),
        data.cartan_det * i64::from(m),
    )
}

/// Integer `k` with `⟨λ, s/M⟩ = k / (c·M)`.
pub fn phase_numerator(lambda: [i64; 2], s: [i64; 2], data: &AlgebraData) -> i64 {
    let v = mat_vec(&data.adjugate(), s);
    lambda[0] * v[0] + lambda[1] * v[1]
}

/// Kac coordinates `(1 − m1 x1 − m2 x2, x1, x2)` of a point; all are
/// non-negative exactly on the fundamental domain.
pub fn kac_coordinates(x: PointCoords, data: &AlgebraData) -> [f64; 3] {
    let [x1, x2] = x.0;
    [
        1.0 - data.marks[0] as f64 * x1 - data.marks[1] as f64 * x2,
        x1,
        x2,
    ]
}

pub fn in_fundamental_domain(x: PointCoords, data: &AlgebraData, tol: f64) -> bool {
    kac_coordinates(x, data).iter().all(|&b| b >= -tol)
}

fn most_negative<T: PartialOrd + Copy>(coords: &[T; 3], zero: T) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in coords.iter().enumerate() {
        if v < zero && best.is_none_or(|b| v < coords[b]) {
            best = Some(i);
        }
    }
    best
}

/// Representative of the affine-Weyl orbit of `x` in the fundamental domain.
pub fn fold_to_fundamental(x: PointCoords, data: &AlgebraData) -> Result<PointCoords> {
    let coroots = [data.simple_coroot(1), data.simple_coroot(2)];
    let top = data.highest_coroot();
    let mut p = x.0;
    for _ in 0..FOLD_ITERATION_CAP {
        let kac = kac_coordinates(PointCoords(p), data);
        let shifted = [kac[0] + FOLD_TOLERANCE, kac[1] + FOLD_TOLERANCE, kac[2] + FOLD_TOLERANCE];
        match most_negative(&shifted, 0.0) {
            None => return Ok(PointCoords(p)),
            Some(0) => {
                // r0 x = x − (⟨ξ,x⟩ − 1) ξ∨
                let k = -kac[0];
                p = [p[0] - k * top[0] as f64, p[1] - k * top[1] as f64];
            }
            Some(i) => {
                let k = p[i - 1];
                let a = coroots[i - 1];
                p = [p[0] - k * a[0] as f64, p[1] - k * a[1] as f64];
            }
        }
    }
    Err(Error::FoldDiverged(FOLD_ITERATION_CAP))
}

/// Exact folding of the lattice point `s / m` into the fundamental domain.
///
/// Returns the folded integer coordinates together with the parity (number
/// of reflections mod 2) of the affine Weyl element used.
pub fn fold_lattice(s: [i64; 2], m: u32, data: &AlgebraData) -> Result<([i64; 2], bool)> {
    let coroots = [data.simple_coroot(1), data.simple_coroot(2)];
    let top = data.highest_coroot();
    let m = i64::from(m);
    let mut p = s;
    let mut odd = false;
    for _ in 0..FOLD_ITERATION_CAP {
        let s0 = m - data.marks[0] * p[0] - data.marks[1] * p[1];
        match most_negative(&[s0, p[0], p[1]], 0) {
            None => return Ok((p, odd)),
            Some(0) => {
                p = [p[0] + s0 * top[0], p[1] + s0 * top[1]];
            }
            Some(i) => {
                let k = p[i - 1];
                let a = coroots[i - 1];
                p = [p[0] - k * a[0], p[1] - k * a[1]];
            }
        }
        odd = !odd;
    }
    Err(Error::FoldDiverged(FOLD_ITERATION_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_constants() {
        let a2 = algebra_data(AlgebraId::A2);
        assert_eq!(a2.weyl_order, 6);
        assert_eq!(a2.cartan_det, 3);
        let g2 = algebra_data(AlgebraId::G2);
        assert_eq!(g2.marks, [2, 3]);
        assert_eq!(g2.dual_marks, [3, 2]);
        let c2 = algebra_data(AlgebraId::C2);
        assert_eq!(c2.cartan_det, 2);
        assert_eq!(c2.even_order, 4);
    }

    #[test]
    fn cartan_inverse_is_exact() {
        for id in AlgebraId::ALL {
            let d = id.data();
            assert_eq!(det2(&d.cartan), d.cartan_det);
            for i in 0..2 {
                for j in 0..2 {
                    let v: Rational64 = (0..2)
                        .map(|k| Rational64::from_integer(d.cartan[i][k]) * d.cartan_inv[k][j])
                        .sum();
                    assert_eq!(v, Rational64::from_integer((i == j) as i64));
                }
            }
        }
    }

    #[test]
    fn highest_root_has_the_marks() {
        // ξ = m1 α1 + m2 α2 must be a root of squared length 2, i.e. ⟨ξ, ξ∨⟩ = 2
        for id in AlgebraId::ALL {
            let d = id.data();
            let xi = d.highest_root();
            let xic = d.highest_coroot();
            assert_eq!(pairing_exact(xi, xic, 1, &d), Rational64::from_integer(2), "{id}");
            // ⟨ξ, x⟩ = m1 x1 + m2 x2 on coweights
            assert_eq!(pairing_exact(xi, [1, 0], 1, &d), Rational64::from_integer(d.marks[0]));
            assert_eq!(pairing_exact(xi, [0, 1], 1, &d), Rational64::from_integer(d.marks[1]));
        }
    }

    #[test]
    fn reflection_examples() {
        let d = algebra_data(AlgebraId::A2);
        assert_eq!(simple_reflection(1, WeightCoords([1.0, 0.0]), &d).0, [-1.0, 1.0]);
        assert_eq!(simple_reflection(2, WeightCoords([0.0, 0.0]), &d).0, [0.0, 0.0]);
        let l = WeightCoords([0.3, -1.7]);
        for i in [1, 2] {
            let back = simple_reflection(i, simple_reflection(i, l, &d), &d);
            assert!((back.0[0] - l.0[0]).abs() < 1e-15 && (back.0[1] - l.0[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn group_orders() {
        for (id, n, e) in [(AlgebraId::A2, 6, 3), (AlgebraId::C2, 8, 4), (AlgebraId::G2, 12, 6)] {
            let w = weyl_group(id);
            assert_eq!(w.len(), n);
            let we = w.even_subgroup();
            assert_eq!(we.len(), e);
            assert!(we.contains(&WeylElement::identity()));
        }
    }

    #[test]
    fn group_is_closed_with_inverses() {
        for id in AlgebraId::ALL {
            let w = weyl_group(id);
            for u in w.iter() {
                assert!(w.contains(&u.inverse()));
                assert_eq!(u.compose(&u.inverse()), WeylElement::identity());
                for v in w.iter() {
                    let uv = u.compose(v);
                    assert!(w.contains(&uv));
                    assert_eq!(uv.det(), u.det() * v.det());
                    assert_eq!(det2(uv.matrix()), uv.det());
                }
            }
        }
    }

    #[test]
    fn pairing_duality() {
        for id in AlgebraId::ALL {
            let d = id.data();
            for i in 1..=2 {
                for j in 1..=2 {
                    let alpha = WeightCoords::from(d.simple_root(i));
                    let mut e = [0.0; 2];
                    e[j - 1] = 1.0;
                    let p = pairing(alpha, PointCoords(e), &d);
                    assert!((p - (i == j) as i32 as f64).abs() < 1e-15);
                }
            }
            assert_eq!(pairing(WeightCoords([0.0, 0.0]), PointCoords([0.4, 2.0]), &d), 0.0);
        }
    }

    #[test]
    fn fold_examples() {
        let d = algebra_data(AlgebraId::A2);
        let x = PointCoords([0.25, 0.5]);
        assert_eq!(fold_to_fundamental(x, &d).unwrap(), x);
        // shift by the coroot α1∨
        let q = d.simple_coroot(1);
        let shifted = PointCoords([0.25 + q[0] as f64, 0.5 + q[1] as f64]);
        let back = fold_to_fundamental(shifted, &d).unwrap();
        assert!((back.0[0] - 0.25).abs() < 1e-12 && (back.0[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fold_lattice_is_exact() {
        for id in AlgebraId::ALL {
            let d = id.data();
            let m = 7;
            for a in -20..20 {
                for b in -20..20 {
                    let (p, _) = fold_lattice([a, b], m, &d).unwrap();
                    let s0 = i64::from(m) - d.marks[0] * p[0] - d.marks[1] * p[1];
                    assert!(p[0] >= 0 && p[1] >= 0 && s0 >= 0);
                    assert_eq!(fold_lattice(p, m, &d).unwrap(), (p, false));
                }
            }
        }
    }

    #[test]
    fn parse_algebra() {
        assert_eq!("g2".parse::<AlgebraId>().unwrap(), AlgebraId::G2);
        assert_eq!("A2".parse::<AlgebraId>().unwrap(), AlgebraId::A2);
        assert!("b2".parse::<AlgebraId>().is_err());
    }
}
