//! Point grids `F_M`, `F_M^e` and label grids `Λ_M`, `Λ_M^e`, with the
//! discrete weights `ε`, `ε^e`, `h∨` and `h^e∨`.
//!
//! A grid point is stored by its Kac coordinates `(s0, s1, s2)` with
//! `s0 + m1 s1 + m2 s2 = M`; it sits at `(s1/M) ω1∨ + (s2/M) ω2∨`.
//! A label is stored as `(t0, t1, t2)` with `t0 + m1∨ t1 + m2∨ t2 = M` and
//! denotes the weight `t1 ω1 + t2 ω2`.
//!
//! The even grids add a reflected copy of the interior, always through the
//! simple reflection `r1`. Enumeration order is lexicographic in `(s1, s2)`
//! (resp. `(t1, t2)`); even grids list the fundamental sector first and then
//! the reflected interior in the order of its base points.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    even_weyl_group, fold_lattice, weyl_group, AlgebraData, AlgebraId, Mat2, WeylElement, WeylGroup,
};
use crate::error::{Error, Result};

/// Index of the simple reflection that generates the reflected sector.
pub const EVEN_SECTOR_REFLECTION: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sector {
    /// Inside the fundamental domain `F`.
    Fundamental,
    /// Inside `r1(int F)`.
    Reflected,
}

impl Sector {
    pub fn as_str(self) -> &'static str {
        match self {
            Sector::Fundamental => "F",
            Sector::Reflected => "R",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "F" | "f" => Ok(Sector::Fundamental),
            "R" | "r" => Ok(Sector::Reflected),
            other => Err(Error::Parse(format!("unknown sector '{other}'"))),
        }
    }
}

/// Which Kac coordinates vanish; the key of the coefficient tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroPattern {
    Interior,
    /// `[a, b, 0]`
    EdgeNo2,
    /// `[a, 0, c]`
    EdgeNo1,
    /// `[0, b, c]`
    EdgeNo0,
    /// `[0, 0, c]`
    Vertex2,
    /// `[0, b, 0]`
    Vertex1,
    /// `[a, 0, 0]`
    Vertex0,
    /// `[0, 0, 0]`, impossible for M ≥ 1
    Empty,
}

impl ZeroPattern {
    pub fn of(c: [u32; 3]) -> Self {
        match (c[0] > 0, c[1] > 0, c[2] > 0) {
            (true, true, true) => ZeroPattern::Interior,
            (true, true, false) => ZeroPattern::EdgeNo2,
            (true, false, true) => ZeroPattern::EdgeNo1,
            (false, true, true) => ZeroPattern::EdgeNo0,
            (false, false, true) => ZeroPattern::Vertex2,
            (false, true, false) => ZeroPattern::Vertex1,
            (true, false, false) => ZeroPattern::Vertex0,
            (false, false, false) => ZeroPattern::Empty,
        }
    }
}

fn check_density(m: u32) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidDensity)
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    algebra: AlgebraId,
    m: u32,
    s: [u32; 3],
}

impl GridPoint {
    pub fn new(algebra: AlgebraId, m: u32, s: [u32; 3]) -> Result<Self> {
        check_density(m)?;
        let d = algebra.data();
        let total = i64::from(s[0]) + d.marks[0] * i64::from(s[1]) + d.marks[1] * i64::from(s[2]);
        if total != i64::from(m) {
            return Err(Error::InvalidCoordinates { what: "point", algebra, m, coords: s });
        }
        Ok(GridPoint { algebra, m, s })
    }

    /// Grid point with lattice coordinates `(s1, s2)`, if it lies in `F_M`.
    pub fn from_lattice(algebra: AlgebraId, m: u32, p: [i64; 2]) -> Option<Self> {
        let d = algebra.data();
        let s0 = i64::from(m) - d.marks[0] * p[0] - d.marks[1] * p[1];
        if p[0] < 0 || p[1] < 0 || s0 < 0 {
            return None;
        }
        Some(GridPoint { algebra, m, s: [s0 as u32, p[0] as u32, p[1] as u32] })
    }

    pub fn origin(algebra: AlgebraId, m: u32) -> Self {
        GridPoint { algebra, m, s: [m, 0, 0] }
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn s(&self) -> [u32; 3] {
        self.s
    }

    /// `(s1, s2)`, the point scaled by M.
    pub fn lattice(&self) -> [i64; 2] {
        [i64::from(self.s[1]), i64::from(self.s[2])]
    }

    pub fn is_interior(&self) -> bool {
        self.s.iter().all(|&v| v > 0)
    }

    pub fn pattern(&self) -> ZeroPattern {
        ZeroPattern::of(self.s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabelPoint {
    algebra: AlgebraId,
    m: u32,
    t: [u32; 3],
}

impl LabelPoint {
    pub fn new(algebra: AlgebraId, m: u32, t: [u32; 3]) -> Result<Self> {
        check_density(m)?;
        let d = algebra.data();
        let total =
            i64::from(t[0]) + d.dual_marks[0] * i64::from(t[1]) + d.dual_marks[1] * i64::from(t[2]);
        if total != i64::from(m) {
            return Err(Error::InvalidCoordinates { what: "label", algebra, m, coords: t });
        }
        Ok(LabelPoint { algebra, m, t })
    }

    pub fn zero(algebra: AlgebraId, m: u32) -> Self {
        LabelPoint { algebra, m, t: [m, 0, 0] }
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn t(&self) -> [u32; 3] {
        self.t
    }

    /// `(t1, t2)`, the weight in ω-coordinates.
    pub fn weight(&self) -> [i64; 2] {
        [i64::from(self.t[1]), i64::from(self.t[2])]
    }

    pub fn is_interior(&self) -> bool {
        self.t.iter().all(|&v| v > 0)
    }

    pub fn pattern(&self) -> ZeroPattern {
        ZeroPattern::of(self.t)
    }
}

/// Point of `F_M^e`: a point of `F_M`, or the `r1`-image of an interior one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvenGridPoint {
    base: GridPoint,
    sector: Sector,
}

impl EvenGridPoint {
    pub fn new(base: GridPoint, sector: Sector) -> Result<Self> {
        if sector == Sector::Reflected && !base.is_interior() {
            return Err(Error::ReflectedBoundary);
        }
        Ok(EvenGridPoint { base, sector })
    }

    pub fn base(&self) -> GridPoint {
        self.base
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// Lattice coordinates (scaled by M) of the actual point.
    pub fn lattice(&self) -> [i64; 2] {
        match self.sector {
            Sector::Fundamental => self.base.lattice(),
            Sector::Reflected => {
                let r = WeylElement::simple_reflection(EVEN_SECTOR_REFLECTION, &self.base.algebra.data());
                r.act_point_lattice(self.base.lattice())
            }
        }
    }
}

/// Label of `Λ_M^e`: a label of `Λ_M`, or the `r1`-image of an interior one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvenLabelPoint {
    base: LabelPoint,
    sector: Sector,
}

impl EvenLabelPoint {
    pub fn new(base: LabelPoint, sector: Sector) -> Result<Self> {
        if sector == Sector::Reflected && !base.is_interior() {
            return Err(Error::ReflectedBoundary);
        }
        Ok(EvenLabelPoint { base, sector })
    }

    pub fn base(&self) -> LabelPoint {
        self.base
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// The weight in ω-coordinates.
    pub fn weight(&self) -> [i64; 2] {
        match self.sector {
            Sector::Fundamental => self.base.weight(),
            Sector::Reflected => {
                let r = WeylElement::simple_reflection(EVEN_SECTOR_REFLECTION, &self.base.algebra.data());
                r.act_weight_lattice(self.base.weight())
            }
        }
    }
}

/// Non-negative solutions of `c0 + k1 c1 + k2 c2 = M`, lexicographic in `(c1, c2)`.
fn solutions(m: u32, k: [i64; 2]) -> impl Iterator<Item = [u32; 3]> {
    let m = i64::from(m);
    (0..=m / k[0]).flat_map(move |c1| {
        let rest = m - k[0] * c1;
        (0..=rest / k[1]).map(move |c2| [(rest - k[1] * c2) as u32, c1 as u32, c2 as u32])
    })
}

pub fn enumerate_points(algebra: AlgebraId, m: u32) -> Result<Vec<GridPoint>> {
    check_density(m)?;
    let d = algebra.data();
    Ok(solutions(m, d.marks).map(|s| GridPoint { algebra, m, s }).collect())
}

pub fn enumerate_labels(algebra: AlgebraId, m: u32) -> Result<Vec<LabelPoint>> {
    check_density(m)?;
    let d = algebra.data();
    Ok(solutions(m, d.dual_marks).map(|t| LabelPoint { algebra, m, t }).collect())
}

pub fn enumerate_points_even(algebra: AlgebraId, m: u32) -> Result<Vec<EvenGridPoint>> {
    let base = enumerate_points(algebra, m)?;
    let fundamental = base.iter().map(|&p| EvenGridPoint { base: p, sector: Sector::Fundamental });
    let reflected = base
        .iter()
        .filter(|p| p.is_interior())
        .map(|&p| EvenGridPoint { base: p, sector: Sector::Reflected });
    Ok(fundamental.chain(reflected).collect())
}

pub fn enumerate_labels_even(algebra: AlgebraId, m: u32) -> Result<Vec<EvenLabelPoint>> {
    let base = enumerate_labels(algebra, m)?;
    let fundamental = base.iter().map(|&l| EvenLabelPoint { base: l, sector: Sector::Fundamental });
    let reflected = base
        .iter()
        .filter(|l| l.is_interior())
        .map(|&l| EvenLabelPoint { base: l, sector: Sector::Reflected });
    Ok(fundamental.chain(reflected).collect())
}

pub fn point_coords(p: &GridPoint) -> crate::algebra::PointCoords {
    let m = f64::from(p.m);
    crate::algebra::PointCoords([f64::from(p.s[1]) / m, f64::from(p.s[2]) / m])
}

pub fn even_point_coords(p: &EvenGridPoint) -> crate::algebra::PointCoords {
    let l = p.lattice();
    let m = f64::from(p.base.m);
    crate::algebra::PointCoords([l[0] as f64 / m, l[1] as f64 / m])
}

pub fn label_coords(l: &LabelPoint) -> crate::algebra::WeightCoords {
    crate::algebra::WeightCoords([f64::from(l.t[1]), f64::from(l.t[2])])
}

/// `ε(x) = |W| / |stab_W(x)|`.
pub fn epsilon(p: &GridPoint) -> u32 {
    use AlgebraId::*;
    use ZeroPattern::*;
    match (p.algebra, p.pattern()) {
        (A2, Interior) => 6,
        (C2, Interior) => 8,
        (G2, Interior) => 12,
        (A2, EdgeNo0 | EdgeNo1 | EdgeNo2) => 3,
        (C2, EdgeNo0 | EdgeNo1 | EdgeNo2) => 4,
        (G2, EdgeNo0 | EdgeNo1 | EdgeNo2) => 6,
        (A2, Vertex2) => 1,
        (C2, Vertex2) => 1,
        (G2, Vertex2) => 2,
        (A2, Vertex1) => 1,
        (C2, Vertex1) => 2,
        (G2, Vertex1) => 3,
        (_, Vertex0) => 1,
        (_, Empty) => unreachable!("grid point with all Kac coordinates zero"),
    }
}

/// `ε^e(x) = |W^e| / |stab_{W^e}(x)|`.
pub fn epsilon_even(p: &EvenGridPoint) -> u32 {
    use AlgebraId::*;
    use ZeroPattern::*;
    let d = p.base.algebra.data();
    if p.sector == Sector::Reflected {
        return d.even_order as u32;
    }
    match (p.base.algebra, p.base.pattern()) {
        (_, Interior | EdgeNo0 | EdgeNo1 | EdgeNo2) => d.even_order as u32,
        (A2, Vertex2) => 1,
        (C2, Vertex2) => 1,
        (G2, Vertex2) => 2,
        (A2, Vertex1) => 1,
        (C2, Vertex1) => 2,
        (G2, Vertex1) => 3,
        (_, Vertex0) => 1,
        (_, Empty) => unreachable!("grid point with all Kac coordinates zero"),
    }
}

/// `h∨_λ`, the order of the stabilizer of `λ` in `W` acting on `P / MQ`.
pub fn h_dual(l: &LabelPoint) -> u32 {
    use AlgebraId::*;
    use ZeroPattern::*;
    match (l.algebra, l.pattern()) {
        (_, Interior) => 1,
        (_, EdgeNo0 | EdgeNo1 | EdgeNo2) => 2,
        (A2, Vertex0 | Vertex1 | Vertex2) => 6,
        (C2, Vertex0) => 8,
        (C2, Vertex1) => 8,
        (C2, Vertex2) => 4,
        (G2, Vertex0) => 12,
        (G2, Vertex1) => 6,
        (G2, Vertex2) => 4,
        (_, Empty) => unreachable!("label with all coordinates zero"),
    }
}

/// `h^e∨_λ`, the order of the stabilizer of `λ` in `W^e` acting on `P / MQ`.
pub fn h_dual_even(l: &EvenLabelPoint) -> u32 {
    use AlgebraId::*;
    use ZeroPattern::*;
    if l.sector == Sector::Reflected {
        return 1;
    }
    match (l.base.algebra, l.base.pattern()) {
        (_, Interior | EdgeNo0 | EdgeNo1 | EdgeNo2) => 1,
        (A2, Vertex0 | Vertex1 | Vertex2) => 3,
        (C2, Vertex0) => 4,
        (C2, Vertex1) => 4,
        (C2, Vertex2) => 2,
        (G2, Vertex0) => 6,
        (G2, Vertex1) => 3,
        (G2, Vertex2) => 2,
        (_, Empty) => unreachable!("label with all coordinates zero"),
    }
}

/// Result of the brute-force orbit count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitStabilizer {
    pub orbit_size: usize,
    pub stabilizer_order: usize,
}

/// Canonical key of `v` modulo the lattice spanned by the columns of `m·basis`,
/// where `adj` is the adjugate of `basis` and `det` its determinant.
fn coset_key(adj: &Mat2, det: i64, m: u32, v: [i64; 2]) -> [i64; 2] {
    let n = det * i64::from(m);
    let w = crate::algebra::mat_vec(adj, v);
    [w[0].rem_euclid(n), w[1].rem_euclid(n)]
}

fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

fn orbit_stabilizer<F>(group: &WeylGroup, v: [i64; 2], act: F, key: impl Fn([i64; 2]) -> [i64; 2]) -> OrbitStabilizer
where
    F: Fn(&WeylElement, [i64; 2]) -> [i64; 2],
{
    let images: HashSet<[i64; 2]> = group.iter().map(|w| key(act(w, v))).collect();
    let orbit_size = images.len();
    assert_eq!(group.len() % orbit_size, 0);
    OrbitStabilizer { orbit_size, stabilizer_order: group.len() / orbit_size }
}

/// Orbit of the point `s / M` in `(1/M) P∨ / Q∨` under `group`.
pub fn point_orbit_stabilizer(s: [i64; 2], m: u32, group: &WeylGroup, data: &AlgebraData) -> OrbitStabilizer {
    // Q∨ is spanned by the columns of C in ω∨-coordinates; scaled by M it is M·C.
    let adj = data.adjugate();
    orbit_stabilizer(group, s, |w, v| w.act_point_lattice(v), |v| coset_key(&adj, data.cartan_det, m, v))
}

/// Orbit of the weight `λ` in `P / MQ` under `group`.
pub fn label_orbit_stabilizer(lambda: [i64; 2], m: u32, group: &WeylGroup, data: &AlgebraData) -> OrbitStabilizer {
    // Q is spanned by the rows of C in ω-coordinates, i.e. the columns of Cᵀ.
    let adj = transpose(&data.adjugate());
    orbit_stabilizer(group, lambda, |w, v| w.act_weight_lattice(v), |v| coset_key(&adj, data.cartan_det, m, v))
}

/// Key identifying the coset of `s` in `(1/M) P∨ / Q∨`.
pub fn point_coset_key(s: [i64; 2], m: u32, data: &AlgebraData) -> [i64; 2] {
    coset_key(&data.adjugate(), data.cartan_det, m, s)
}

/// Oracle value of `ε` for a grid point.
pub fn epsilon_oracle(p: &GridPoint) -> u32 {
    let d = p.algebra.data();
    point_orbit_stabilizer(p.lattice(), p.m, weyl_group(p.algebra), &d).orbit_size as u32
}

/// Oracle value of `ε^e` for an even grid point.
pub fn epsilon_even_oracle(p: &EvenGridPoint) -> u32 {
    let d = p.base.algebra.data();
    point_orbit_stabilizer(p.lattice(), p.base.m, even_weyl_group(p.base.algebra), &d).orbit_size as u32
}

/// Oracle value of `h∨` for a label.
pub fn h_dual_oracle(l: &LabelPoint) -> u32 {
    let d = l.algebra.data();
    label_orbit_stabilizer(l.weight(), l.m, weyl_group(l.algebra), &d).stabilizer_order as u32
}

/// Oracle value of `h^e∨` for an even label.
pub fn h_dual_even_oracle(l: &EvenLabelPoint) -> u32 {
    let d = l.base.algebra.data();
    label_orbit_stabilizer(l.weight(), l.base.m, even_weyl_group(l.base.algebra), &d).stabilizer_order as u32
}

/// Orbit-function family, and with it the grid pair it lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GridKind {
    /// C-functions on `F_M` / `Λ_M`, summed over `W`.
    C,
    /// E-functions on `F_M^e` / `Λ_M^e`, summed over `W^e`.
    E,
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridKind::C => "C",
            GridKind::E => "E",
        })
    }
}

impl FromStr for GridKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c" => Ok(GridKind::C),
            "e" => Ok(GridKind::E),
            other => Err(Error::Parse(format!("unknown grid kind '{other}'"))),
        }
    }
}

/// Points, labels and weights of one `(algebra, M, kind)` triple.
///
/// C grids are represented with every point in the fundamental sector, so
/// both kinds share one layout.
#[derive(Clone, Debug)]
pub struct Grid {
    algebra: AlgebraId,
    m: u32,
    kind: GridKind,
    points: Vec<EvenGridPoint>,
    labels: Vec<EvenLabelPoint>,
    lattice: Vec<[i64; 2]>,
    epsilons: Vec<u32>,
    weights: Vec<[i64; 2]>,
    hs: Vec<u32>,
    index: HashMap<[i64; 2], usize>,
}

impl Grid {
    pub fn new(algebra: AlgebraId, m: u32, kind: GridKind) -> Result<Self> {
        let (points, labels) = match kind {
            GridKind::C => (
                enumerate_points(algebra, m)?
                    .into_iter()
                    .map(|base| EvenGridPoint { base, sector: Sector::Fundamental })
                    .collect::<Vec<_>>(),
                enumerate_labels(algebra, m)?
                    .into_iter()
                    .map(|base| EvenLabelPoint { base, sector: Sector::Fundamental })
                    .collect::<Vec<_>>(),
            ),
            GridKind::E => (enumerate_points_even(algebra, m)?, enumerate_labels_even(algebra, m)?),
        };
        let lattice: Vec<_> = points.iter().map(EvenGridPoint::lattice).collect();
        let epsilons = match kind {
            GridKind::C => points.iter().map(|p| epsilon(&p.base)).collect(),
            GridKind::E => points.iter().map(epsilon_even).collect(),
        };
        let weights = labels.iter().map(EvenLabelPoint::weight).collect();
        let hs = match kind {
            GridKind::C => labels.iter().map(|l| h_dual(&l.base)).collect(),
            GridKind::E => labels.iter().map(h_dual_even).collect(),
        };
        let index = lattice.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(Grid { algebra, m, kind, points, labels, lattice, epsilons, weights, hs, index })
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn data(&self) -> AlgebraData {
        self.algebra.data()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[EvenGridPoint] {
        &self.points
    }

    pub fn labels(&self) -> &[EvenLabelPoint] {
        &self.labels
    }

    /// Lattice coordinates (scaled by M) of every point, in grid order.
    pub fn lattice(&self) -> &[[i64; 2]] {
        &self.lattice
    }

    /// `ε` (C) or `ε^e` (E) of every point.
    pub fn epsilons(&self) -> &[u32] {
        &self.epsilons
    }

    /// Weights `λ` of every label in ω-coordinates.
    pub fn weights(&self) -> &[[i64; 2]] {
        &self.weights
    }

    /// `h∨` (C) or `h^e∨` (E) of every label.
    pub fn hs(&self) -> &[u32] {
        &self.hs
    }

    /// The group the orbit sums run over.
    pub fn group(&self) -> &'static WeylGroup {
        match self.kind {
            GridKind::C => weyl_group(self.algebra),
            GridKind::E => even_weyl_group(self.algebra),
        }
    }

    /// `c |G| M²`, the common factor of the orthogonality constants.
    pub fn scale(&self) -> f64 {
        let d = self.data();
        let m = f64::from(self.m);
        d.cartan_det as f64 * self.group().len() as f64 * m * m
    }

    /// `⟨Φ_λ, Φ_λ⟩` for the label at `index`.
    pub fn norm(&self, index: usize) -> f64 {
        self.scale() * f64::from(self.hs[index])
    }

    pub fn index_of(&self, lattice: [i64; 2]) -> Option<usize> {
        self.index.get(&lattice).copied()
    }

    pub fn origin_index(&self) -> usize {
        self.index[&[0, 0]]
    }

    /// Index of the grid point equivalent to the lattice point `s / M` under
    /// the affine (C) or even affine (E) Weyl group.
    pub fn locate(&self, s: [i64; 2]) -> Result<usize> {
        let d = self.data();
        let (p, odd) = fold_lattice(s, self.m, &d)?;
        let target = match self.kind {
            GridKind::C => p,
            GridKind::E => {
                let on_fundamental = GridPoint::from_lattice(self.algebra, self.m, p).ok_or(Error::OffGrid(p))?;
                if odd && on_fundamental.is_interior() {
                    WeylElement::simple_reflection(EVEN_SECTOR_REFLECTION, &d).act_point_lattice(p)
                } else {
                    // boundary points are fixed by a reflection, which fixes the parity
                    p
                }
            }
        };
        self.index_of(target).ok_or(Error::OffGrid(target))
    }
}
