//! Data model for a cA_n singularity `R = k[[x,y,u,v]]/(f1...fn - uv)`:
//! the ordered prime factorization with its ideal-class labels, flags of
//! subsets indexing the modifying generators, the combinatorial picture of
//! a flag, and divisor classes in Cl(R) = Z^t / <(a_1,...,a_t)>.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{is_unit_multiple, Poly};

/// The singularity data: n ordered prime factors f_1..f_n falling into t
/// distinct ideal classes, with multiplicity vector `a` (a[c-1] = number of
/// factors of class c). Optionally one polynomial representative per class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorData {
    n: usize,
    t: usize,
    class_of: Vec<usize>,
    a: Vec<usize>,
    reps: Option<Vec<Poly>>,
}

impl FactorData {
    /// Build from the class labels of f_1..f_n (1-based, contiguous) and
    /// optional representatives. The multiplicity vector is derived.
    pub fn new(class_of: Vec<usize>, reps: Option<Vec<Poly>>) -> Result<Self> {
        if class_of.is_empty() {
            return Err(Error::BadFactorData("no prime factors".into()));
        }
        let t = *class_of.iter().max().unwrap();
        let mut a = vec![0usize; t];
        for &c in &class_of {
            if c == 0 || c > t {
                return Err(Error::BadFactorData(format!(
                    "class label {c} out of range"
                )));
            }
            a[c - 1] += 1;
        }
        Self::from_parts(class_of, a, reps)
    }

    /// Build from explicitly given multiplicities, checking consistency.
    pub fn from_parts(
        class_of: Vec<usize>,
        a: Vec<usize>,
        reps: Option<Vec<Poly>>,
    ) -> Result<Self> {
        let n = class_of.len();
        let t = a.len();
        if n == 0 {
            return Err(Error::BadFactorData("no prime factors".into()));
        }
        let mut counts = vec![0usize; t];
        for &c in &class_of {
            if c == 0 || c > t {
                return Err(Error::BadFactorData(format!(
                    "class label {c} out of range 1..{t}"
                )));
            }
            counts[c - 1] += 1;
        }
        for c in 0..t {
            if counts[c] == 0 {
                return Err(Error::BadFactorData(format!(
                    "class {} has no factors",
                    c + 1
                )));
            }
            if counts[c] != a[c] {
                return Err(Error::BadFactorData(format!(
                    "multiplicity mismatch for class {}: declared {}, counted {}",
                    c + 1,
                    a[c],
                    counts[c]
                )));
            }
        }
        if let Some(reps) = &reps {
            if reps.len() != t {
                return Err(Error::BadFactorData(format!(
                    "expected {t} representatives, got {}",
                    reps.len()
                )));
            }
            for (c, rep) in reps.iter().enumerate() {
                if rep.nvars() != 2 {
                    return Err(Error::BadFactorData(format!(
                        "representative of class {} must be a polynomial in x, y",
                        c + 1
                    )));
                }
                if rep.is_zero() {
                    return Err(Error::BadFactorData(format!(
                        "representative of class {} is zero",
                        c + 1
                    )));
                }
                if !rep.constant_term().is_zero() {
                    return Err(Error::BadFactorData(format!(
                        "representative of class {} has a nonzero constant term",
                        c + 1
                    )));
                }
            }
        }
        Ok(FactorData {
            n,
            t,
            class_of,
            a,
            reps,
        })
    }

    /// All prime factors pairwise distinct (the isolated-singularity case).
    pub fn distinct(n: usize) -> Self {
        FactorData::new((1..=n).collect(), None).expect("valid")
    }

    /// Re-check invariants and report advisory warnings: classes declared
    /// distinct whose representatives are scalar multiples of each other.
    pub fn validate(&self) -> Result<Vec<String>> {
        let checked =
            FactorData::from_parts(self.class_of.clone(), self.a.clone(), self.reps.clone())?;
        debug_assert_eq!(&checked, self);
        let mut warnings = Vec::new();
        if let Some(reps) = &self.reps {
            for i in 0..self.t {
                for j in i + 1..self.t {
                    if is_unit_multiple(&reps[i], &reps[j])? {
                        warnings.push(format!(
                            "classes {} and {} are declared distinct but their \
                             representatives are scalar multiples",
                            i + 1,
                            j + 1
                        ));
                    }
                }
            }
        }
        Ok(warnings)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Ideal class (1-based) of the i-th prime factor, i in 1..=n.
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i - 1]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.a
    }

    pub fn reps(&self) -> Option<&[Poly]> {
        self.reps.as_deref()
    }

    /// Representative of the i-th prime factor (by its class), if present.
    pub fn rep_of_factor(&self, i: usize) -> Option<&Poly> {
        self.reps.as_ref().map(|r| &r[self.class_of[i - 1] - 1])
    }

    /// Product of the representatives of the factors indexed by `indices`
    /// (with multiplicity), as a polynomial in x, y. Empty product is 1.
    pub fn product_of(&self, indices: &[usize]) -> Result<Poly> {
        let reps = self.reps.as_ref().ok_or(Error::MissingReps)?;
        let mut acc = Poly::one(2);
        for &i in indices {
            acc = acc.checked_mul(&reps[self.class_of[i - 1] - 1])?;
        }
        Ok(acc)
    }
}

/// A flag: a strictly increasing chain of proper nonempty subsets of
/// {1..n}. The empty chain (m = 0, T = R) is allowed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Flag {
    chain: Vec<Vec<usize>>,
}

impl Flag {
    /// Validates strict inclusion and the 1..=n range. Each subset may be
    /// given in any order; subsets are stored sorted.
    pub fn new(chain: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut sorted_chain = Vec::with_capacity(chain.len());
        for subset in chain {
            let set: BTreeSet<usize> = subset.iter().copied().collect();
            if set.len() != subset.len() {
                return Err(Error::BadFlag(format!("repeated index in {subset:?}")));
            }
            for &i in &set {
                if i == 0 || i > n {
                    return Err(Error::BadFlag(format!("index {i} out of range 1..{n}")));
                }
            }
            sorted_chain.push(set.into_iter().collect::<Vec<_>>());
        }
        let flag = Flag {
            chain: sorted_chain,
        };
        for w in flag.chain.windows(2) {
            if !is_strict_subset(&w[0], &w[1]) {
                return Err(Error::BadFlag(format!(
                    "{:?} does not strictly contain {:?}",
                    w[1], w[0]
                )));
            }
        }
        if let Some(first) = flag.chain.first() {
            if first.is_empty() {
                return Err(Error::BadFlag("first subset is empty".into()));
            }
        }
        if let Some(last) = flag.chain.last() {
            if last.len() >= n {
                return Err(Error::BadFlag("last subset is not proper".into()));
            }
        }
        Ok(flag)
    }

    pub fn empty() -> Self {
        Flag { chain: Vec::new() }
    }

    /// Number of non-free summands m.
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn is_maximal(&self, n: usize) -> bool {
        self.chain.len() + 1 == n
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.chain
    }

    /// The j-th layer I_j \ I_{j-1} for j in 1..=m+1, with I_0 = {} and
    /// I_{m+1} = {1..n}; indices ascending.
    pub fn layers(&self, n: usize) -> Vec<Vec<usize>> {
        let mut prev: BTreeSet<usize> = BTreeSet::new();
        let mut out = Vec::with_capacity(self.chain.len() + 1);
        for subset in &self.chain {
            let cur: BTreeSet<usize> = subset.iter().copied().collect();
            out.push(cur.difference(&prev).copied().collect());
            prev = cur;
        }
        let full: BTreeSet<usize> = (1..=n).collect();
        out.push(full.difference(&prev).copied().collect());
        out
    }
}

fn is_strict_subset(a: &[usize], b: &[usize]) -> bool {
    if a.len() >= b.len() {
        return false;
    }
    let bs: BTreeSet<usize> = b.iter().copied().collect();
    a.iter().all(|x| bs.contains(x))
}

/// The picture of a flag: an ordered sequence of m+1 nonempty multisets of
/// ideal classes, stored as count vectors of length t. Group j collects the
/// classes of the primes in I_j \ I_{j-1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSequence {
    groups: Vec<Vec<usize>>,
}

impl GroupSequence {
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::BadFlag("a picture has at least one group".into()));
        }
        let t = groups[0].len();
        for g in &groups {
            if g.len() != t {
                return Err(Error::BadFactorData("group length mismatch".into()));
            }
            if g.iter().all(|&c| c == 0) {
                return Err(Error::BadFlag("empty group in picture".into()));
            }
        }
        Ok(GroupSequence { groups })
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Number of groups, m + 1.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of curves m in the picture.
    pub fn curves(&self) -> usize {
        self.groups.len() - 1
    }

    /// Componentwise sum of all groups; equals the multiplicity vector.
    pub fn total(&self) -> Vec<usize> {
        let mut acc = vec![0usize; self.groups[0].len()];
        for g in &self.groups {
            for (s, &c) in acc.iter_mut().zip(g) {
                *s += c;
            }
        }
        acc
    }

    pub(crate) fn from_groups_unchecked(groups: Vec<Vec<usize>>) -> Self {
        GroupSequence { groups }
    }
}

impl fmt::Display for GroupSequence {
    /// Groups separated by `|`, each a multiset of class labels.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, g) in self.groups.iter().enumerate() {
            if j > 0 {
                write!(f, " | ")?;
            }
            let mut first = true;
            for (c, &count) in g.iter().enumerate() {
                for _ in 0..count {
                    if !first {
                        write!(f, " ")?;
                    }
                    first = false;
                    write!(f, "{}", c + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Compute the picture P(F) of a flag.
pub fn picture_of_flag(fd: &FactorData, flag: &Flag) -> Result<GroupSequence> {
    check_flag(fd, flag)?;
    let mut groups = Vec::with_capacity(flag.len() + 1);
    for layer in flag.layers(fd.n()) {
        let mut counts = vec![0usize; fd.t()];
        for i in layer {
            counts[fd.class_of(i) - 1] += 1;
        }
        groups.push(counts);
    }
    GroupSequence::new(groups)
}

fn check_flag(fd: &FactorData, flag: &Flag) -> Result<()> {
    if let Some(last) = flag.subsets().last() {
        if last.len() >= fd.n() {
            return Err(Error::BadFlag("last subset is not proper".into()));
        }
    }
    for subset in flag.subsets() {
        for &i in subset {
            if i == 0 || i > fd.n() {
                return Err(Error::BadFlag(format!(
                    "index {i} out of range 1..{}",
                    fd.n()
                )));
            }
        }
    }
    Ok(())
}

/// A multiset word: length-n sequence of class labels with letter counts
/// equal to the multiplicity vector. Identifies a basic MM generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: Vec<usize>, fd: &FactorData) -> Result<Self> {
        let mut counts = vec![0usize; fd.t()];
        for &l in &letters {
            if l == 0 || l > fd.t() {
                return Err(Error::BadWord(format!(
                    "letter {l} out of range 1..{}",
                    fd.t()
                )));
            }
            counts[l - 1] += 1;
        }
        if counts != fd.multiplicities() {
            return Err(Error::BadWord(format!(
                "letter counts {:?} do not match multiplicities {:?}",
                counts,
                fd.multiplicities()
            )));
        }
        Ok(Word { letters })
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<usize>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Canonical key: digits joined without separator when every letter is
    /// a single digit, otherwise comma-separated.
    pub fn key(&self) -> String {
        word_key(&self.letters)
    }
}

pub(crate) fn word_key(letters: &[usize]) -> String {
    if letters.iter().all(|&l| l <= 9) {
        letters
            .iter()
            .map(|&l| char::from(b'0' + l as u8))
            .collect()
    } else {
        letters
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// Word of a maximal flag: letter j is the class of the unique element of
/// I_j \ I_{j-1}.
pub fn word_of_maximal_flag(fd: &FactorData, flag: &Flag) -> Result<Word> {
    if !flag.is_maximal(fd.n()) {
        return Err(Error::BadFlag(format!(
            "flag has {} subsets, a maximal flag for n={} has {}",
            flag.len(),
            fd.n(),
            fd.n() - 1
        )));
    }
    check_flag(fd, flag)?;
    let mut letters = Vec::with_capacity(fd.n());
    for layer in flag.layers(fd.n()) {
        debug_assert_eq!(layer.len(), 1);
        letters.push(fd.class_of(layer[0]));
    }
    Word::new(letters, fd)
}

/// Maximal flag realizing a word: at step j adjoin the smallest unused
/// factor index of class w_j. Inverse to `word_of_maximal_flag` up to the
/// iso-class identification; exact inverse on words.
pub fn flag_of_word(fd: &FactorData, word: &Word) -> Result<Flag> {
    if word.len() != fd.n() {
        return Err(Error::BadWord(format!(
            "word length {} does not match n={}",
            word.len(),
            fd.n()
        )));
    }
    Word::new(word.letters().to_vec(), fd)?;
    let mut used = vec![false; fd.n() + 1];
    let mut current: Vec<usize> = Vec::new();
    let mut chain = Vec::with_capacity(fd.n() - 1);
    for (j, &letter) in word.letters().iter().enumerate() {
        let i = (1..=fd.n())
            .find(|&i| !used[i] && fd.class_of(i) == letter)
            .expect("letter counts match multiplicities");
        used[i] = true;
        current.push(i);
        current.sort_unstable();
        if j + 1 < fd.n() {
            chain.push(current.clone());
        }
    }
    Flag::new(chain, fd.n())
}

/// An element of Cl(R) = Z^t / <(a_1,...,a_t)> in canonical representative
/// form: the first coordinate is reduced into [0, a_1).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClassVector {
    v: Vec<i64>,
}

impl ClassVector {
    pub fn coords(&self) -> &[i64] {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.v.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Canonical representative of v modulo the subgroup generated by the
/// multiplicity vector: the unique v - k*a with 0 <= first coordinate < a_1.
/// Equality of the results decides equality in Cl(R).
pub fn class_normal_form(fd: &FactorData, v: &[i64]) -> ClassVector {
    assert_eq!(v.len(), fd.t(), "class vector length must be t");
    let a: Vec<i64> = fd.multiplicities().iter().map(|&x| x as i64).collect();
    let k = v[0].div_euclid(a[0]);
    let reduced = v.iter().zip(&a).map(|(&vi, &ai)| vi - k * ai).collect();
    ClassVector { v: reduced }
}

/// Divisor class of the ideal (u, f_I): the sum of the basis vectors of the
/// classes of the factors indexed by I, in canonical form.
pub fn class_of_subset(fd: &FactorData, subset: &[usize]) -> Result<ClassVector> {
    let mut v = vec![0i64; fd.t()];
    let mut seen = BTreeSet::new();
    for &i in subset {
        if i == 0 || i > fd.n() {
            return Err(Error::BadSubset(format!(
                "index {i} out of range 1..{}",
                fd.n()
            )));
        }
        if !seen.insert(i) {
            return Err(Error::BadSubset(format!("repeated index {i}")));
        }
        v[fd.class_of(i) - 1] += 1;
    }
    Ok(class_normal_form(fd, &v))
}

/// Isomorphism class of the module T^F: the set of divisor classes of its
/// non-free summands. Two flags give isomorphic basic modules exactly when
/// these sets agree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModuleIsoClass {
    summands: BTreeSet<ClassVector>,
}

impl ModuleIsoClass {
    pub fn summands(&self) -> impl Iterator<Item = &ClassVector> {
        self.summands.iter()
    }

    pub fn count(&self) -> usize {
        self.summands.len()
    }
}

pub fn iso_class(fd: &FactorData, flag: &Flag) -> Result<ModuleIsoClass> {
    check_flag(fd, flag)?;
    let mut summands = BTreeSet::new();
    for subset in flag.subsets() {
        summands.insert(class_of_subset(fd, subset)?);
    }
    Ok(ModuleIsoClass { summands })
}
