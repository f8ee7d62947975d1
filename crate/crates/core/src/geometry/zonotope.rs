use serde::Serialize;

use super::{check_arity, check_isomorphism, GeometryError, IsoWitness, Sign, SignVector};
use crate::mask::{self, Mask};
use crate::poset::{enumerate_pds, SupportPair};

/// Characterization of the sign vectors of `cV` for `V = (I_{k-1} | 1)`:
/// zero, or `u_k = 0` with both signs among `u_1..u_{k-1}`, or `u_k != 0`
/// repeated somewhere in `u_1..u_{k-1}`.
pub fn is_covector(u: &SignVector) -> bool {
    let (head, last) = u.0.split_at(u.len() - 1);
    match last[0] {
        Sign::Zero => u.is_zero() || (head.contains(&Sign::Plus) && head.contains(&Sign::Minus)),
        s => head.contains(&s),
    }
}

/// Decides realizability of `u` as `sign(c_1, ..., c_{k-1}, sum c_i)`
/// directly: `c_i` has the sign `u_i`, so the sum can be positive iff some
/// `c_i > 0`, negative iff some `c_i < 0`, and zero iff there are either no
/// nonzero `c_i` or both signs occur.
pub fn covector_feasible(u: &SignVector) -> bool {
    let k = u.len();
    let forced_pos = u.0[..k - 1].contains(&Sign::Plus);
    let forced_neg = u.0[..k - 1].contains(&Sign::Minus);
    match u.0[k - 1] {
        Sign::Plus => forced_pos,
        Sign::Minus => forced_neg,
        Sign::Zero => forced_pos == forced_neg,
    }
}

/// All covectors of `(I_{k-1} | 1)`, including zero, in `SignVector::all`
/// order.
pub fn signed_covectors(k: usize) -> Vec<SignVector> {
    SignVector::all(k).filter(is_covector).collect()
}

fn last(k: usize) -> Mask {
    1 << (k - 1)
}

/// The isomorphism onto covectors, on a pair `(R, T)`: `R` goes to `-` and `T` to `+` on the
/// first `k-1` coordinates, while `k` lands on the opposite side.
pub fn f_map(k: usize, pair: &SupportPair) -> SignVector {
    let (r, t) = (pair.first(), pair.second());
    let kbit = last(k);
    let (minus, plus) = if r & kbit != 0 {
        (r & !kbit, t | kbit)
    } else if t & kbit != 0 {
        (r | kbit, t & !kbit)
    } else {
        (r, t)
    };
    SignVector(
        (0..k)
            .map(|i| {
                if minus >> i & 1 == 1 {
                    Sign::Minus
                } else if plus >> i & 1 == 1 {
                    Sign::Plus
                } else {
                    Sign::Zero
                }
            })
            .collect(),
    )
}

/// Inverse of [`f_map`] from the explicit case split on `v_k`; `None` for
/// the zero vector or a non-covector.
pub fn f_inverse(v: &SignVector) -> Option<SupportPair> {
    let k = v.len();
    let kbit = last(k);
    let (minus, plus) = (v.positions(Sign::Minus), v.positions(Sign::Plus));
    let (r, t) = match v.0[k - 1] {
        Sign::Zero => (minus, plus),
        Sign::Plus => (minus | kbit, plus & !kbit),
        Sign::Minus => (minus & !kbit, plus | kbit),
    };
    SupportPair::new(k, r, t, true).ok()
}

/// Dimension of the zonotope face with covector `u`: the rank of the
/// columns of `V` where `u` vanishes. The unit columns are independent and
/// the all-ones column adds one unless every unit column is present.
pub fn face_dimension(u: &SignVector) -> usize {
    let k = u.len();
    let zeros = u.positions(Sign::Zero);
    let units = mask::len(zeros & (last(k) - 1));
    let ones = usize::from(zeros & last(k) != 0 && units < k - 1);
    units + ones
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZonotopeReport {
    pub k: usize,
    /// Nonzero covectors.
    pub covectors: usize,
    pub characterization_matches_oracle: bool,
    pub iso: IsoWitness,
    /// `f^{-1} o f = id` on pairs and `f o f^{-1} = id` on nonzero covectors.
    pub inverse_round_trips: bool,
    /// `f(J, I) = -f(I, J)`.
    pub antipodal: bool,
    /// Proper faces by dimension `0..=k-2`.
    pub face_counts: Vec<usize>,
    pub euler: i64,
    pub sphere_euler: i64,
    pub dimension_matches_height: bool,
}

impl ZonotopeReport {
    pub fn passed(&self) -> bool {
        self.characterization_matches_oracle
            && self.iso.holds()
            && self.inverse_round_trips
            && self.antipodal
            && self.euler == self.sphere_euler
            && self.dimension_matches_height
    }
}

/// Checks that `f` is an isomorphism from the ordered poset onto the face
/// lattice of the boundary of the zonotope of `(I_{k-1} | 1)`, with the
/// bottom sent to the empty face.
pub fn zonotope_iso(k: usize) -> Result<ZonotopeReport, GeometryError> {
    check_arity(k, super::DEFAULT_GEOMETRY_CAP)?;
    let characterization_matches_oracle =
        SignVector::all(k).all(|u| is_covector(&u) == covector_feasible(&u));
    let nonzero: Vec<SignVector> = signed_covectors(k)
        .into_iter()
        .filter(|u| !u.is_zero())
        .collect();

    let pds = enumerate_pds(k, true)?;
    // None is the bottom on one side and the empty face on the other.
    let domain: Vec<Option<SupportPair>> =
        pds.elements().iter().map(|e| e.pair().copied()).collect();
    let mut codomain: Vec<Option<SignVector>> = vec![None];
    codomain.extend(nonzero.iter().cloned().map(Some));
    let iso = check_isomorphism(
        &domain,
        &codomain,
        |p| p.as_ref().map(|p| f_map(k, p)),
        |a, b| match (a, b) {
            (None, _) => true,
            (_, None) => false,
            (Some(a), Some(b)) => a.precedes(b),
        },
        |u, v| match (u, v) {
            (None, _) => true,
            (_, None) => false,
            (Some(u), Some(v)) => u.refines(v),
        },
        |p| p.map_or("bottom".to_string(), |p| p.label()),
    );

    let pairs: Vec<SupportPair> = domain.iter().flatten().copied().collect();
    let inverse_round_trips = pairs.iter().all(|p| f_inverse(&f_map(k, p)) == Some(*p))
        && nonzero
            .iter()
            .all(|u| f_inverse(u).map(|p| f_map(k, &p)).as_ref() == Some(u));
    let antipodal = pairs.iter().all(|p| {
        let flipped = SupportPair::new(k, p.second(), p.first(), true).unwrap();
        f_map(k, &flipped) == f_map(k, p).negate()
    });
    let dimension_matches_height = pairs
        .iter()
        .all(|p| face_dimension(&f_map(k, p)) == p.height(k));

    let mut face_counts = vec![0usize; k - 1];
    for u in &nonzero {
        face_counts[face_dimension(u)] += 1;
    }
    let euler = face_counts
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    Ok(ZonotopeReport {
        k,
        covectors: nonzero.len(),
        characterization_matches_oracle,
        iso,
        inverse_round_trips,
        antipodal,
        face_counts,
        euler,
        sphere_euler: 1 + if k.is_multiple_of(2) { 1 } else { -1 },
        dimension_matches_height,
    })
}
