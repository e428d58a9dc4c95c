//! NP-hardness of unconstrained object learning, via set-splitting.
//!
//! A set-splitting instance (variables plus size-2/3 clauses, asking for a
//! 2-coloring with no monochromatic clause) is compiled into an
//! object-learning instance: a list of images, each annotated with the
//! lengths of the two objects that must produce it in the open-room model,
//! under a global object budget. Satisfying assignments map to object sets
//! that render every image; the reverse direction is the NP-hard question
//! and is only checked here by exhaustive candidate enumeration at tiny n.
//!
//! Alphabet: six colors: 0, 1, T, F, grey, and the distinct background.

use crate::model::{Color, Image};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub const ZERO: Color = Color::Obj(0);
pub const ONE: Color = Color::Obj(1);
pub const TRUE_MARK: Color = Color::Obj(2);
pub const FALSE_MARK: Color = Color::Obj(3);
pub const GREY: Color = Color::Obj(4);
/// Number of object colors in reduction instances.
pub const OL_COLORS: u16 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HardnessError {
    BadClauseSize { clause: usize, size: usize },
    MemberOutOfRange { clause: usize, member: usize },
    DuplicateMember { clause: usize },
    /// The reduction needs at least two variables.
    NTooSmall,
    /// Brute force is capped at 24 variables.
    NTooLarge { n: usize },
    AssignmentLength { expected: usize, got: usize },
}

impl fmt::Display for HardnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HardnessError::BadClauseSize { clause, size } => {
                write!(f, "clause {clause} has size {size}, want 2 or 3")
            }
            HardnessError::MemberOutOfRange { clause, member } => {
                write!(f, "clause {clause} names variable {member} out of range")
            }
            HardnessError::DuplicateMember { clause } => {
                write!(f, "clause {clause} repeats a variable")
            }
            HardnessError::NTooSmall => write!(f, "need n >= 2 variables"),
            HardnessError::NTooLarge { n } => write!(f, "brute force capped at n <= 24, got {n}"),
            HardnessError::AssignmentLength { expected, got } => {
                write!(f, "assignment length {got}, expected {expected}")
            }
        }
    }
}

impl core::error::Error for HardnessError {}

/// A set-splitting instance: `n` variables and clauses of size 2 or 3.
/// Clause members are stored sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsInstance {
    pub n: usize,
    pub clauses: Vec<Vec<usize>>,
}

impl SsInstance {
    pub fn new(n: usize, clauses: Vec<Vec<usize>>) -> Result<Self, HardnessError> {
        let mut normalized = Vec::with_capacity(clauses.len());
        for (ci, mut clause) in clauses.into_iter().enumerate() {
            if clause.len() < 2 || clause.len() > 3 {
                return Err(HardnessError::BadClauseSize { clause: ci, size: clause.len() });
            }
            for &v in &clause {
                if v >= n {
                    return Err(HardnessError::MemberOutOfRange { clause: ci, member: v });
                }
            }
            clause.sort_unstable();
            if clause.windows(2).any(|w| w[0] == w[1]) {
                return Err(HardnessError::DuplicateMember { clause: ci });
            }
            normalized.push(clause);
        }
        Ok(SsInstance { n, clauses: normalized })
    }

    /// True when the assignment leaves no clause monochromatic.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.n
            && self.clauses.iter().all(|clause| {
                let trues = clause.iter().filter(|&&v| assignment[v]).count();
                trues > 0 && trues < clause.len()
            })
    }
}

/// One annotated image of an object-learning instance: it must be
/// producible by two objects of lengths `l1` and `l2` in the open room.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OlTriple {
    pub image: Image,
    pub l1: usize,
    pub l2: usize,
}

/// The reduced object-learning instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OlInstance {
    /// Object budget: `2n + C(n,2) + C(n,3)`.
    pub n_obj: usize,
    /// Uniform image length.
    pub d: usize,
    pub triples: Vec<OlTriple>,
}

/// All candidate clauses over `n` variables: size-2 subsets in
/// lexicographic order, then size-3 subsets. Column indices are 1-based
/// positions in this list.
pub fn clause_columns(n: usize) -> Vec<Vec<usize>> {
    let mut cols = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            cols.push(vec![i, j]);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                cols.push(vec![i, j, k]);
            }
        }
    }
    cols
}

/// 1-based column of a clause in the fixed enumeration.
pub fn column_of(n: usize, clause: &[usize]) -> Option<usize> {
    let mut sorted = clause.to_vec();
    sorted.sort_unstable();
    clause_columns(n).iter().position(|c| *c == sorted).map(|p| p + 1)
}

/// `C(n,2) + C(n,3) = (n^3 - n) / 6`: indicator width minus one, mask
/// ceiling, and the non-variable part of the object budget.
pub fn column_count(n: usize) -> usize {
    (n * n * n - n) / 6
}

/// The right indicator vector of a variable: a leading 0, then one slot per
/// column holding 1 iff the variable belongs to that column's clause.
fn indicator(var: usize, columns: &[Vec<usize>]) -> Vec<Color> {
    let mut out = Vec::with_capacity(columns.len() + 1);
    out.push(ZERO);
    for clause in columns {
        out.push(if clause.contains(&var) { ONE } else { ZERO });
    }
    out
}

fn mirrored(v: &[Color]) -> Vec<Color> {
    v.iter().rev().copied().collect()
}

fn padded_to(mut pixels: Vec<Color>, d: usize) -> Vec<Color> {
    debug_assert!(pixels.len() <= d);
    pixels.resize(d, Color::Background);
    pixels
}

/// Compiles a set-splitting instance into an object-learning instance.
///
/// Images come in three kinds, all padded with background to the uniform
/// length `D = 2(C(n,2)+C(n,3)) + 5`:
/// - per variable: `b, I_l(x), T, I_r(x), b` and the same with `F`
///   (object lengths `K+2` and `K+2`);
/// - per clause with column `k`: `1, g^k, T, b...` and with `F`
///   (object lengths `k` and `K+2`);
/// - per mask size `j` in `2..=K`: `b, g^j, b, g, b...`
///   (object lengths `j` and `1`).
pub fn reduce(ss: &SsInstance) -> Result<OlInstance, HardnessError> {
    if ss.n < 2 {
        return Err(HardnessError::NTooSmall);
    }
    let n = ss.n;
    let columns = clause_columns(n);
    let big_k = columns.len();
    debug_assert_eq!(big_k, column_count(n));
    let d = 2 * big_k + 5;
    let var_len = big_k + 2;

    let mut triples = Vec::new();
    for var in 0..n {
        let right = indicator(var, &columns);
        let left = mirrored(&right);
        for sign in [TRUE_MARK, FALSE_MARK] {
            let mut pixels = vec![Color::Background];
            pixels.extend_from_slice(&left);
            pixels.push(sign);
            pixels.extend_from_slice(&right);
            pixels.push(Color::Background);
            debug_assert_eq!(pixels.len(), d);
            triples.push(OlTriple { image: Image { pixels }, l1: var_len, l2: var_len });
        }
    }
    for clause in &ss.clauses {
        let k = column_of(n, clause).expect("clause is one of the enumerated columns");
        for sign in [TRUE_MARK, FALSE_MARK] {
            let mut pixels = vec![ONE];
            pixels.extend(core::iter::repeat_n(GREY, k));
            pixels.push(sign);
            triples.push(OlTriple { image: Image { pixels: padded_to(pixels, d) }, l1: k, l2: var_len });
        }
    }
    for j in 2..=big_k {
        let mut pixels = vec![Color::Background];
        pixels.extend(core::iter::repeat_n(GREY, j));
        pixels.push(Color::Background);
        pixels.push(GREY);
        triples.push(OlTriple { image: Image { pixels: padded_to(pixels, d) }, l1: j, l2: 1 });
    }

    Ok(OlInstance { n_obj: 2 * n + big_k, d, triples })
}

/// The object set a satisfying assignment induces: per variable, the left
/// indicator capped by its truth mark and the opposite mark leading the
/// right indicator; plus grey masks of every size up to `K`.
pub fn assignment_to_objects(
    ss: &SsInstance,
    assignment: &[bool],
) -> Result<Vec<Vec<Color>>, HardnessError> {
    if assignment.len() != ss.n {
        return Err(HardnessError::AssignmentLength { expected: ss.n, got: assignment.len() });
    }
    let columns = clause_columns(ss.n);
    let big_k = columns.len();
    let mut objects = Vec::with_capacity(2 * ss.n + big_k);
    for (var, &value) in assignment.iter().enumerate() {
        let right = indicator(var, &columns);
        let left = mirrored(&right);
        let (cap, lead) = if value { (TRUE_MARK, FALSE_MARK) } else { (FALSE_MARK, TRUE_MARK) };
        let mut first = left;
        first.push(cap);
        let mut second = vec![lead];
        second.extend_from_slice(&right);
        objects.push(first);
        objects.push(second);
    }
    objects.push(vec![GREY]);
    for j in 2..=big_k {
        objects.push(vec![GREY; j]);
    }
    Ok(objects)
}

/// Open-room placements of two objects that render one triple's image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OlWitness {
    pub front_object: usize,
    pub front_left: i64,
    pub back_object: usize,
    pub back_left: i64,
}

fn renders(
    image: &[Color],
    front: (&[Color], i64),
    back: (&[Color], i64),
) -> bool {
    for (col, want) in image.iter().enumerate() {
        let col = col as i64;
        let got = if col >= front.1 && col < front.1 + front.0.len() as i64 {
            front.0[(col - front.1) as usize]
        } else if col >= back.1 && col < back.1 + back.0.len() as i64 {
            back.0[(col - back.1) as usize]
        } else {
            Color::Background
        };
        if got != *want {
            return false;
        }
    }

    true
}

/// Searches for open-room placements of two objects with the stated
/// lengths producing the triple's image exactly. Exhaustive over ordered
/// object pairs (repetition allowed), both depth orders, and all offsets.
fn witness_for_triple(triple: &OlTriple, objects: &[Vec<Color>]) -> Option<OlWitness> {
    let d = triple.image.d() as i64;
    let image = &triple.image.pixels;
    for (i1, o1) in objects.iter().enumerate() {
        if o1.len() != triple.l1 {
            continue;
        }
        for (i2, o2) in objects.iter().enumerate() {
            if o2.len() != triple.l2 {
                continue;
            }
            for left1 in -(o1.len() as i64) + 1..=d {
                for left2 in -(o2.len() as i64) + 1..=d {
                    if renders(image, (o1, left1), (o2, left2)) {
                        return Some(OlWitness {
                            front_object: i1,
                            front_left: left1,
                            back_object: i2,
                            back_left: left2,
                        });
                    }
                    if renders(image, (o2, left2), (o1, left1)) {
                        return Some(OlWitness {
                            front_object: i2,
                            front_left: left2,
                            back_object: i1,
                            back_left: left1,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Placement witnesses for every triple, or `None` as soon as some triple
/// cannot be produced (or the budget is blown).
pub fn verify_ol_witnesses(
    instance: &OlInstance,
    objects: &[Vec<Color>],
) -> Option<Vec<OlWitness>> {
    if objects.len() > instance.n_obj {
        return None;
    }
    instance.triples.iter().map(|t| witness_for_triple(t, objects)).collect()
}

/// True iff the object set is within budget and renders every triple.
pub fn verify_ol(instance: &OlInstance, objects: &[Vec<Color>]) -> bool {
    verify_ol_witnesses(instance, objects).is_some()
}

/// Exhaustive set-splitting solver for `n <= 24`; returns the first
/// satisfying assignment in mask order (variable `i` = bit `i`).
pub fn brute_force_ss(ss: &SsInstance) -> Result<Option<Vec<bool>>, HardnessError> {
    if ss.n > 24 {
        return Err(HardnessError::NTooLarge { n: ss.n });
    }
    for mask in 0u64..(1u64 << ss.n) {
        let assignment: Vec<bool> = (0..ss.n).map(|i| mask >> i & 1 == 1).collect();
        if ss.satisfied_by(&assignment) {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_instance_counts() {
        // n = 3, clauses {0,1} and {0,1,2}: 6 variable images, 4 set
        // images, 3 mask images (j in 2..=4), budget 10, indicator width 5.
        let ss = SsInstance::new(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        let ol = reduce(&ss).unwrap();
        assert_eq!(column_count(3), 4);
        assert_eq!(ol.n_obj, 10);
        assert_eq!(ol.d, 13);
        assert_eq!(ol.triples.len(), 6 + 4 + 3);
        assert!(ol.triples.iter().all(|t| t.image.d() == 13));
        let columns = clause_columns(3);
        assert_eq!(indicator(0, &columns).len(), 5);
    }

    #[test]
    fn column_enumeration_is_pairs_then_triples() {
        let cols = clause_columns(3);
        assert_eq!(cols, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]);
        assert_eq!(column_of(3, &[1, 0]), Some(1));
        assert_eq!(column_of(3, &[2, 1, 0]), Some(4));
    }

    #[test]
    fn empty_clause_list_is_well_formed() {
        let ss = SsInstance::new(3, vec![]).unwrap();
        let ol = reduce(&ss).unwrap();
        assert_eq!(ol.triples.len(), 6 + 3);
        // Any solution's objects verify (set images absent).
        let objs = assignment_to_objects(&ss, &[false, false, false]).unwrap();
        assert!(verify_ol(&ol, &objs));
    }

    #[test]
    fn object_lengths_match_stated_triple_lengths() {
        let ss = SsInstance::new(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        let objs = assignment_to_objects(&ss, &[true, false, true]).unwrap();
        assert_eq!(objs.len(), 10);
        let var_len = column_count(3) + 2;
        assert_eq!(objs.iter().filter(|o| o.len() == var_len).count(), 6);
        assert_eq!(objs.iter().filter(|o| o.len() == 1).count(), 1);
        for j in 2..=4 {
            assert!(objs.iter().any(|o| o.len() == j && o.iter().all(|&c| c == GREY)));
        }
    }

    #[test]
    fn complementary_assignments_share_only_masks() {
        let ss = SsInstance::new(3, vec![vec![0, 1]]).unwrap();
        let a = assignment_to_objects(&ss, &[true, false, true]).unwrap();
        let b = assignment_to_objects(&ss, &[false, true, false]).unwrap();
        let shared: Vec<_> = a.iter().filter(|o| b.contains(o)).collect();
        // Exactly the K masks (incl. the single grey) are shared.
        assert_eq!(shared.len(), column_count(3));
        assert!(shared.iter().all(|o| o.iter().all(|&c| c == GREY)));
    }

    #[test]
    fn satisfying_assignment_verifies_and_violating_fails() {
        let ss = SsInstance::new(3, vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        let ol = reduce(&ss).unwrap();
        // x0 = true, x1 = false splits both clauses.
        let good = [true, false, false];
        assert!(ss.satisfied_by(&good));
        let objs = assignment_to_objects(&ss, &good).unwrap();
        assert!(verify_ol(&ol, &objs));
        // All-true violates both clauses; its objects cannot render the
        // F-side set images.
        let bad = [true, true, true];
        assert!(!ss.satisfied_by(&bad));
        let objs_bad = assignment_to_objects(&ss, &bad).unwrap();
        assert!(!verify_ol(&ol, &objs_bad));
    }

    #[test]
    fn brute_force_finds_expected_solutions() {
        let single = SsInstance::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(brute_force_ss(&single).unwrap(), Some(vec![true, false]));
        let none = SsInstance::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap();
        assert_eq!(brute_force_ss(&none).unwrap(), None);
        let empty = SsInstance::new(2, vec![]).unwrap();
        assert_eq!(brute_force_ss(&empty).unwrap(), Some(vec![false, false]));
        assert!(matches!(
            brute_force_ss(&SsInstance::new(25, vec![]).unwrap()),
            Err(HardnessError::NTooLarge { n: 25 })
        ));
    }

    #[test]
    fn instance_validation() {
        assert!(matches!(
            SsInstance::new(3, vec![vec![0]]),
            Err(HardnessError::BadClauseSize { .. })
        ));
        assert!(matches!(
            SsInstance::new(3, vec![vec![0, 3]]),
            Err(HardnessError::MemberOutOfRange { .. })
        ));
        assert!(matches!(
            SsInstance::new(3, vec![vec![1, 1]]),
            Err(HardnessError::DuplicateMember { .. })
        ));
        let tiny = SsInstance::new(1, vec![]).unwrap();
        assert_eq!(reduce(&tiny), Err(HardnessError::NTooSmall));
    }
}
