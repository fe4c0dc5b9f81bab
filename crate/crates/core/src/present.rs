//! Classification predicates, Calabi-Yau reduction as residual-singularity
//! splitting, endomorphism quivers with loop rules, matrix-factorization
//! emission, MM-module parametrization and the derived-equivalence
//! criterion for partial resolutions.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::all_words;
use crate::model::{class_normal_form, picture_of_flag, ClassVector, FactorData, Flag, Word};
use crate::poly::{linear_part, span_dim, Mat2, Poly};

/// Every flag indexes a modifying generator.
pub fn is_modifying(fd: &FactorData, flag: &Flag) -> Result<bool> {
    picture_of_flag(fd, flag)?;
    Ok(true)
}

/// T is maximal modifying exactly when the flag is maximal.
pub fn is_mm(fd: &FactorData, flag: &Flag) -> Result<bool> {
    picture_of_flag(fd, flag)?;
    Ok(flag.is_maximal(fd.n()))
}

/// T is cluster tilting exactly when the flag is maximal and no prime
/// factor lies in m^2, i.e. every class representative has a nonzero
/// linear part. Requires representatives.
pub fn is_ct(fd: &FactorData, flag: &Flag) -> Result<bool> {
    picture_of_flag(fd, flag)?;
    let reps = fd.reps().ok_or(Error::MissingReps)?;
    if !flag.is_maximal(fd.n()) {
        return Ok(false);
    }
    for rep in reps {
        if linear_part(rep)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

/// Number of basic MM generators: the multinomial coefficient
/// (a_1 + ... + a_t)! / (a_1! ... a_t!).
pub fn count_mm(fd: &FactorData) -> BigUint {
    let mut acc = factorial(fd.n());
    for &ai in fd.multiplicities() {
        acc /= factorial(ai);
    }
    acc
}

/// Number of Morita classes of maximal modification algebras: one per basic
/// MM generator, since twisting by a divisor class preserves the
/// endomorphism algebra.
pub fn morita_class_count(fd: &FactorData) -> BigUint {
    count_mm(fd)
}

/// The splitting of the Calabi-Yau reduction at T^F: one residual
/// singularity uv = g_j per group of the picture, carried as its own
/// factorization data (classes renumbered contiguously, representatives
/// retained).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub pieces: Vec<FactorData>,
}

pub fn cy_reduce(fd: &FactorData, flag: &Flag) -> Result<ReductionResult> {
    picture_of_flag(fd, flag)?;
    let mut pieces = Vec::with_capacity(flag.len() + 1);
    for layer in flag.layers(fd.n()) {
        let mut present: Vec<usize> = layer.iter().map(|&i| fd.class_of(i)).collect();
        present.sort_unstable();
        present.dedup();
        let class_of: Vec<usize> = layer
            .iter()
            .map(|&i| present.binary_search(&fd.class_of(i)).expect("present") + 1)
            .collect();
        let reps = fd.reps().map(|reps| {
            present
                .iter()
                .map(|&c| reps[c - 1].clone())
                .collect::<Vec<_>>()
        });
        pieces.push(FactorData::new(class_of, reps)?);
    }
    Ok(ReductionResult { pieces })
}

/// Parametrizes a basic MM module: an MM generator word together with a
/// twisting divisor class.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MMParam {
    pub word: Word,
    pub twist: ClassVector,
}

/// The MM modules are the reflexive twists of MM generators by divisor
/// classes. Since Cl(R) may be infinite, this takes a caller-supplied
/// sample of classes and returns the deduplicated parameter list.
pub fn mm_params(fd: &FactorData, class_group_sample: &[Vec<i64>]) -> Vec<MMParam> {
    let mut set = BTreeSet::new();
    for v in class_group_sample {
        assert_eq!(v.len(), fd.t(), "sample vector length must be t");
        let twist = class_normal_form(fd, v);
        for word in all_words(fd) {
            set.insert(MMParam {
                word,
                twist: twist.clone(),
            });
        }
    }
    set.into_iter().collect()
}

/// The matrix factorization presenting the ideal (u, f_I):
/// A = [[f_I, u], [v, f_Ic]], B = [[f_Ic, -u], [-v, f_I]], with
/// A*B = B*A = (f - uv) I_2.
pub fn mf_pair(fd: &FactorData, subset: &[usize]) -> Result<(Mat2, Mat2)> {
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
    }
    let complement: Vec<usize> = (1..=fd.n()).filter(|i| !seen.contains(i)).collect();
    let f_i = fd.product_of(subset)?.lift_to_4();
    let f_ic = fd.product_of(&complement)?.lift_to_4();
    let u = Poly::monomial(4, [0, 0, 1, 0], BigRational::one());
    let v = Poly::monomial(4, [0, 0, 0, 1], BigRational::one());
    let a = Mat2::new([[f_i.clone(), u.clone()], [v.clone(), f_ic.clone()]]);
    let b = Mat2::new([[f_ic, -&u], [-&v, f_i]]);
    Ok((a, b))
}

/// Report of the derived-equivalence test between two partial resolutions:
/// the multisets of residual-singularity classes, and what differs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedEquivReport {
    pub equivalent: bool,
    pub curves_first: usize,
    pub curves_second: usize,
    /// Canonical singularity classes present (with multiplicity) in the
    /// first picture but not the second, and vice versa.
    pub only_in_first: Vec<ClassVector>,
    pub only_in_second: Vec<ClassVector>,
}

fn singularity_multiset(fd: &FactorData, flag: &Flag) -> Result<Vec<ClassVector>> {
    let picture = picture_of_flag(fd, flag)?;
    let mut out: Vec<ClassVector> = picture
        .groups()
        .iter()
        .map(|g| {
            let v: Vec<i64> = g.iter().map(|&c| c as i64).collect();
            class_normal_form(fd, &v)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Sufficient condition for X^F and X^G to be derived equivalent: the same
/// number of curves and the same multiset of residual singularities. Only
/// the sufficient direction is claimed.
pub fn derived_equiv_sufficient(fd: &FactorData, f: &Flag, g: &Flag) -> Result<bool> {
    Ok(derived_equiv_diagnostic(fd, f, g)?.equivalent)
}

/// As `derived_equiv_sufficient`, reporting which singularity classes
/// differ when the test fails.
pub fn derived_equiv_diagnostic(fd: &FactorData, f: &Flag, g: &Flag) -> Result<DerivedEquivReport> {
    let first = singularity_multiset(fd, f)?;
    let second = singularity_multiset(fd, g)?;
    let mut only_in_first = first.clone();
    let mut only_in_second = second.clone();
    remove_common(&mut only_in_first, &mut only_in_second);
    let equivalent = f.len() == g.len() && only_in_first.is_empty() && only_in_second.is_empty();
    Ok(DerivedEquivReport {
        equivalent,
        curves_first: f.len(),
        curves_second: g.len(),
        only_in_first,
        only_in_second,
    })
}

fn remove_common<T: Ord + Clone>(a: &mut Vec<T>, b: &mut Vec<T>) {
    let (mut i, mut j) = (0, 0);
    let mut keep_a = Vec::new();
    let mut keep_b = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => {
                keep_a.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                keep_b.push(b[j].clone());
                j += 1;
            }
        }
    }
    keep_a.extend_from_slice(&a[i..]);
    keep_b.extend_from_slice(&b[j..]);
    *a = keep_a;
    *b = keep_b;
}

/// The quiver of the endomorphism algebra of T^F. Vertices sit on a cycle
/// R, T_I1, ..., T_Im; arrows and loops are plain data with string labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    /// "R" followed by "T_I1", ..., "T_Im".
    pub vertices: Vec<String>,
    /// The subset of {1..n} at each vertex; empty for R.
    pub subsets: Vec<Vec<usize>>,
    pub arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub source: String,
    pub target: String,
    pub label: String,
}

impl Quiver {
    pub fn loop_count_at(&self, vertex: &str) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.source == vertex && a.target == vertex)
            .count()
    }

    pub fn non_loop_arrow_count(&self) -> usize {
        self.arrows.iter().filter(|a| a.source != a.target).count()
    }

    pub fn loop_labels_at(&self, vertex: &str) -> Vec<String> {
        self.arrows
            .iter()
            .filter(|a| a.source == vertex && a.target == vertex)
            .map(|a| a.label.clone())
            .collect()
    }

    /// DOT rendering: directed, arrow labels shown, deterministic order.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph endomorphism {\n");
        for v in &self.vertices {
            out.push_str(&format!("  \"{v}\";\n"));
        }
        for a in &self.arrows {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                a.source, a.target, a.label
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Loop labels for a vertex whose adjacent groups have products g and h:
/// none when the linear parts of g and h span m/m^2, one labelled the
/// first of x, y outside the span when they span a line, and both x and y
/// when both linear parts vanish.
fn loop_labels(g: &Poly, h: &Poly) -> Result<Vec<&'static str>> {
    let lg = linear_part(g)?;
    let lh = linear_part(h)?;
    Ok(match span_dim(&lg, &lh) {
        2 => vec![],
        0 => vec!["x", "y"],
        _ => {
            let generator = if lg.is_zero() { &lh } else { &lg };
            if generator.cy.is_zero() {
                // span is the x-axis, so x is inside it
                vec!["y"]
            } else {
                vec!["x"]
            }
        }
    })
}

/// Build the quiver of End(T^F). Requires polynomial representatives; the
/// group products g_j and the span of their linear parts decide the loops.
pub fn build_quiver(fd: &FactorData, flag: &Flag) -> Result<Quiver> {
    if fd.reps().is_none() {
        return Err(Error::MissingReps);
    }
    picture_of_flag(fd, flag)?;
    let layers = flag.layers(fd.n());
    let g: Vec<Poly> = layers
        .iter()
        .map(|layer| fd.product_of(layer))
        .collect::<Result<_>>()?;
    for gj in &g {
        if !gj.constant_term().is_zero() {
            return Err(Error::ConstantTerm);
        }
    }
    let m = flag.len();

    let mut vertices = vec!["R".to_string()];
    let mut subsets = vec![Vec::new()];
    for (j, subset) in flag.subsets().iter().enumerate() {
        vertices.push(format!("T_I{}", j + 1));
        subsets.push(subset.clone());
    }

    let mut arrows = Vec::new();
    let arrow = |s: &str, t: &str, label: String| Arrow {
        source: s.to_string(),
        target: t.to_string(),
        label,
    };
    let over_u = |p: &Poly| format!("({p})/u");
    match m {
        0 => {}
        1 => {
            arrows.push(arrow("R", "T_I1", g[0].to_string()));
            arrows.push(arrow("R", "T_I1", "u".into()));
            arrows.push(arrow("T_I1", "R", over_u(&g[1])));
            arrows.push(arrow("T_I1", "R", "inc".into()));
        }
        _ => {
            arrows.push(arrow("R", "T_I1", g[0].to_string()));
            for j in 2..=m {
                arrows.push(arrow(&vertices[j - 1], &vertices[j], g[j - 1].to_string()));
            }
            arrows.push(arrow(&vertices[m], "R", over_u(&g[m])));
            arrows.push(arrow("T_I1", "R", "inc".into()));
            for j in 2..=m {
                arrows.push(arrow(&vertices[j], &vertices[j - 1], "inc".into()));
            }
            arrows.push(arrow("R", &vertices[m], "u".into()));
        }
    }

    // loops: vertex R sees the first and last group, T_Ii its two
    // neighboring groups
    for (idx, vertex) in vertices.iter().enumerate() {
        let (gi, gj) = if idx == 0 {
            (&g[0], &g[m])
        } else {
            (&g[idx - 1], &g[idx])
        };
        for label in loop_labels(gi, gj)? {
            arrows.push(arrow(vertex, vertex, label.to_string()));
        }
    }

    Ok(Quiver {
        vertices,
        subsets,
        arrows,
    })
}
