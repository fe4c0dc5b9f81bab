//! Mutation of modifying generators at arbitrary summand sets, realized as
//! reflection of the combinatorial picture: each connected component of the
//! chosen curve set is reversed in place. The adjacent-transposition special
//! case acts on words of maximal flags.

use crate::error::{Error, Result};
use crate::model::{GroupSequence, Word};

/// A nonempty set of curve indices J inside {1..m}, selecting the non-free
/// summands to mutate at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandSet {
    indices: Vec<usize>,
}

impl SummandSet {
    /// `m` is the number of curves of the picture being mutated.
    pub fn new(mut indices: Vec<usize>, m: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::BadSummands("J must be nonempty".into()));
        }
        indices.sort_unstable();
        indices.dedup();
        for &j in &indices {
            if j == 0 || j > m {
                return Err(Error::BadSummands(format!("index {j} out of range 1..{m}")));
            }
        }
        Ok(SummandSet { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// The decomposition of J into maximal runs of consecutive integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    /// Inclusive intervals [l, u], sorted, pairwise non-adjacent.
    pub intervals: Vec<(usize, usize)>,
}

/// Split J into its connected components.
pub fn connected_components(j: &SummandSet, m: usize) -> Result<ComponentDecomposition> {
    for &x in j.indices() {
        if x == 0 || x > m {
            return Err(Error::BadSummands(format!("index {x} out of range 1..{m}")));
        }
    }
    let mut intervals = Vec::new();
    let mut iter = j.indices().iter().copied();
    let first = iter.next().expect("SummandSet is nonempty");
    let (mut lo, mut hi) = (first, first);
    for x in iter {
        if x == hi + 1 {
            hi = x;
        } else {
            intervals.push((lo, hi));
            lo = x;
            hi = x;
        }
    }
    intervals.push((lo, hi));
    Ok(ComponentDecomposition { intervals })
}

/// The J-reflection of a picture: for each connected component [l, u] of J,
/// the contiguous block of groups at positions l..=u+1 is reversed. This is
/// the picture of the mutation at the summands indexed by J. Reflection is
/// an involution, so the same map computes both mutation directions.
pub fn reflect(picture: &GroupSequence, j: &SummandSet) -> Result<GroupSequence> {
    let m = picture.curves();
    let components = connected_components(j, m)?;
    let mut groups: Vec<Vec<usize>> = picture.groups().to_vec();
    for (l, u) in components.intervals {
        groups[l - 1..=u].reverse();
    }
    Ok(GroupSequence::from_groups_unchecked(groups))
}

/// The left mutation at the summands indexed by J. Identical to `reflect`.
pub fn mu_minus(picture: &GroupSequence, j: &SummandSet) -> Result<GroupSequence> {
    reflect(picture, j)
}

/// The right mutation at the summands indexed by J. Exposed as the same map
/// as `mu_minus`: reflection is an involution and the two mutations are
/// mutually inverse on modules, so both act as the J-reflection on
/// pictures.
pub fn mu_plus(picture: &GroupSequence, j: &SummandSet) -> Result<GroupSequence> {
    reflect(picture, j)
}

/// Whether mutation at J fixes the picture, i.e. J is componentwise
/// symmetric.
pub fn is_fixed(picture: &GroupSequence, j: &SummandSet) -> Result<bool> {
    Ok(reflect(picture, j)? == *picture)
}

/// Mutation of a maximal flag at its i-th summand: the word composed with
/// the adjacent transposition s_i. Agrees with `reflect` at J = {i} under
/// the word/picture correspondence. Equal adjacent letters give back the
/// same word (the loop case).
pub fn mu_adjacent(word: &Word, i: usize) -> Result<Word> {
    let n = word.len();
    if i == 0 || i >= n {
        return Err(Error::BadSummands(format!(
            "position {i} out of range 1..{}",
            n - 1
        )));
    }
    let mut letters = word.letters().to_vec();
    letters.swap(i - 1, i);
    Ok(Word::from_letters_unchecked(letters))
}
