//! Cube face lattices, sign vectors of the configuration `(I_{k-1} | 1)`,
//! and the combinatorial geometry of the support posets.
//!
//! Everything is combinatorial: faces are sign patterns, and isomorphisms
//! are checked element by element.

mod complex;
mod zonotope;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::mask::{self, Mask};
use crate::poset::{enumerate_pds, Element, PosetDS, PosetError, SupportPair};

pub use complex::{
    complex_export, projective_complex_check, zonotope_off, CellExport, ComplexExport,
    ProjectiveReport, INTERSECTION_CHECK_MAX,
};
pub use zonotope::{
    covector_feasible, f_inverse, f_map, face_dimension, is_covector, signed_covectors,
    zonotope_iso, ZonotopeReport,
};

pub const DEFAULT_GEOMETRY_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("arity k = {0} is too small (need k >= 2)")]
    ArityTooSmall(usize),
    #[error("arity k = {k} exceeds the cap {cap}")]
    ArityCapExceeded { k: usize, cap: usize },
    #[error("indices m = {m}, n = {n} must be distinct elements of [{k}]")]
    InvalidIndices { m: usize, n: usize, k: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

pub(crate) fn check_arity(k: usize, cap: usize) -> Result<(), GeometryError> {
    if k < 2 {
        return Err(GeometryError::ArityTooSmall(k));
    }
    if k > cap {
        return Err(GeometryError::ArityCapExceeded { k, cap });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub const ALL: [Sign; 3] = [Sign::Minus, Sign::Zero, Sign::Plus];

    pub fn negate(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Zero => "0",
            Sign::Plus => "+",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SignVector(pub Vec<Sign>);

impl SignVector {
    pub fn zero(k: usize) -> Self {
        SignVector(vec![Sign::Zero; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == Sign::Zero)
    }

    /// 0-based positions holding `s`, as a mask.
    pub fn positions(&self, s: Sign) -> Mask {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == s)
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    /// `self` refines `other` when `other_i` is `0` or `self_i` everywhere;
    /// on faces of the zonotope this is containment `F(self) <= F(other)`.
    pub fn refines(&self, other: &SignVector) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(&a, &b)| b == Sign::Zero || a == b)
    }

    pub fn negate(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| s.negate()).collect())
    }

    /// All `3^k` sign vectors of length `k`.
    pub fn all(k: usize) -> impl Iterator<Item = SignVector> {
        (0..3u64.pow(k as u32)).map(move |mut code| {
            let mut v = Vec::with_capacity(k);
            for _ in 0..k {
                v.push(Sign::ALL[(code % 3) as usize]);
                code /= 3;
            }
            SignVector(v)
        })
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CubeEntry {
    Zero,
    One,
    Free,
}

/// A nonempty face of the unit `d`-cube.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CubeFace(pub Vec<CubeEntry>);

impl CubeFace {
    pub fn dimension(&self) -> usize {
        self.0.iter().filter(|&&e| e == CubeEntry::Free).count()
    }

    pub fn is_subface_of(&self, other: &CubeFace) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(&a, &b)| b == CubeEntry::Free || a == b)
    }
}

impl fmt::Display for CubeFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.0 {
            f.write_str(match e {
                CubeEntry::Zero => "0",
                CubeEntry::One => "1",
                CubeEntry::Free => "*",
            })?;
        }
        Ok(())
    }
}

/// `None` is the empty face.
pub type LatticeFace = Option<CubeFace>;

pub fn face_leq(a: &LatticeFace, b: &LatticeFace) -> bool {
    match (a, b) {
        (None, _) => true,
        (_, None) => false,
        (Some(a), Some(b)) => a.is_subface_of(b),
    }
}

/// The face lattice of the `d`-cube: the empty face, then all `3^d`
/// patterns.
pub fn cube_face_lattice(d: usize) -> Vec<LatticeFace> {
    let entries = [CubeEntry::Zero, CubeEntry::One, CubeEntry::Free];
    let mut out = vec![None];
    for mut code in 0..3u64.pow(d as u32) {
        let mut p = Vec::with_capacity(d);
        for _ in 0..d {
            p.push(entries[(code % 3) as usize]);
            code /= 3;
        }
        out.push(Some(CubeFace(p)));
    }
    out
}

/// Outcome of checking that a map between finite posets is an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub domain: usize,
    pub codomain: usize,
    pub bijective: bool,
    pub order_preserving: bool,
    pub order_reflecting: bool,
    pub failure: Option<String>,
}

impl IsoWitness {
    pub fn holds(&self) -> bool {
        self.bijective && self.order_preserving && self.order_reflecting
    }
}

pub(crate) fn check_isomorphism<A, B, M, LA, LB, S>(
    domain: &[A],
    codomain: &[B],
    map: M,
    leq_a: LA,
    leq_b: LB,
    show: S,
) -> IsoWitness
where
    A: Sync,
    B: Sync + Send + Eq + Hash + Clone,
    M: Fn(&A) -> B + Sync,
    LA: Fn(&A, &A) -> bool + Sync,
    LB: Fn(&B, &B) -> bool + Sync,
    S: Fn(&A) -> String,
{
    let image: Vec<B> = domain.par_iter().map(&map).collect();
    let targets: HashMap<&B, usize> = codomain.iter().zip(0..).collect();
    let mut hit = vec![false; codomain.len()];
    let mut failure = None;
    let mut bijective = domain.len() == codomain.len();
    for (x, y) in domain.iter().zip(&image) {
        match targets.get(y) {
            Some(&t) if !hit[t] => hit[t] = true,
            Some(_) => {
                bijective = false;
                failure.get_or_insert_with(|| format!("{} collides with another element", show(x)));
            }
            None => {
                bijective = false;
                failure.get_or_insert_with(|| format!("{} maps outside the codomain", show(x)));
            }
        }
    }
    if bijective && hit.iter().any(|h| !h) {
        bijective = false;
    }
    // (i, j, preserved) for the first pair where the orders disagree
    let bad = (0..domain.len()).into_par_iter().find_map_first(|i| {
        (0..domain.len()).find_map(|j| {
            let a = leq_a(&domain[i], &domain[j]);
            let b = leq_b(&image[i], &image[j]);
            (a != b).then_some((i, j, a))
        })
    });
    let (mut order_preserving, mut order_reflecting) = (true, true);
    if let Some((i, j, a)) = bad {
        if a {
            order_preserving = false;
        } else {
            order_reflecting = false;
        }
        failure.get_or_insert_with(|| {
            format!(
                "order differs on {} and {}",
                show(&domain[i]),
                show(&domain[j])
            )
        });
    }
    IsoWitness {
        domain: domain.len(),
        codomain: codomain.len(),
        bijective,
        order_preserving,
        order_reflecting,
        failure,
    }
}

/// Orients an unordered pair below `{i, j}` so that it reads `(R, T)` with
/// `i <= R`, `j <= T`.
fn oriented_below(top: &SupportPair, p: &SupportPair) -> (Mask, Mask) {
    let (r, t) = (p.first(), p.second());
    if mask::is_subset(top.first(), r) && mask::is_subset(top.second(), t) {
        (r, t)
    } else {
        (t, r)
    }
}

/// Checks that the principal ideal below element `y` of `pds` is isomorphic
/// to the face lattice of the cube on the free coordinates `[k] - (I u J)`,
/// via `(R, T) |-> N^- = R - I, N^+ = T - J` with free coordinates relabeled
/// increasingly.
pub fn ideal_cube_iso(pds: &PosetDS, y: usize) -> Result<IsoWitness, GeometryError> {
    let top = *pds.element(y)?.pair().ok_or(PosetError::NoSuchElement(y))?;
    let k = pds.k();
    let free: Vec<usize> = mask::indices(mask::full(k) & !(top.first() | top.second())).collect();
    let ideal = pds.ideal(y);
    let cube = cube_face_lattice(free.len());
    let map = |&z: &usize| -> LatticeFace {
        let p = pds.elements()[z].pair()?;
        let (r, t) = oriented_below(&top, p);
        Some(CubeFace(
            free.iter()
                .map(|&i| {
                    if r >> i & 1 == 1 {
                        CubeEntry::Zero
                    } else if t >> i & 1 == 1 {
                        CubeEntry::One
                    } else {
                        CubeEntry::Free
                    }
                })
                .collect(),
        ))
    };
    Ok(check_isomorphism(
        &ideal,
        &cube,
        map,
        |&a, &b| pds.leq(a, b),
        face_leq,
        |&z| pds.elements()[z].label(),
    ))
}

/// Principal ideals below `({m}, {n})` in the ordered poset and below
/// `{{m}, {n}}` in the unordered one, each against the face lattice of the
/// `(k-2)`-cube. Indices are 1-based.
pub fn principal_ideal_cube_iso(
    k: usize,
    m: usize,
    n: usize,
) -> Result<(IsoWitness, IsoWitness), GeometryError> {
    check_arity(k, DEFAULT_GEOMETRY_CAP)?;
    if m == n || m == 0 || n == 0 || m > k || n > k {
        return Err(GeometryError::InvalidIndices { m, n, k });
    }
    let (im, jn) = (mask::from_one_based([m]), mask::from_one_based([n]));
    let mut out = Vec::new();
    for ordered in [true, false] {
        let pds = enumerate_pds(k, ordered)?;
        let y = pds.find(im, jn)?;
        out.push(ideal_cube_iso(&pds, y)?);
    }
    let unordered = out.pop().unwrap();
    Ok((out.pop().unwrap(), unordered))
}

/// Every principal ideal of the unordered poset checked against a cube.
pub fn all_ideals_are_cubes(k: usize) -> Result<bool, GeometryError> {
    check_arity(k, DEFAULT_GEOMETRY_CAP)?;
    let pds = enumerate_pds(k, false)?;
    for (y, e) in pds.elements().iter().enumerate() {
        if let Element::Pair(_) = e {
            if !ideal_cube_iso(&pds, y)?.holds() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
