//! Exact sparse polynomial arithmetic over the rationals in the variables
//! x, y (two-variable ring) or x, y, u, v (four-variable ring).
//!
//! Coefficients are arbitrary-precision rationals; there is no floating
//! point and no truncation order. All tests used downstream (linear parts,
//! membership in m^2, scalar multiples) read only data visible in a
//! polynomial representative.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const VAR_NAMES: [char; 4] = ['x', 'y', 'u', 'v'];

/// Exponent vector. Entries past `nvars` are always zero.
pub type Exp = [u32; 4];

/// A sparse polynomial with exact rational coefficients.
///
/// Invariants: no stored coefficient is zero, and every exponent vector is
/// zero beyond `nvars`. Equal polynomials have identical term maps, so
/// derived `Eq`/`Ord` are semantic equality and a canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exp, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars == 2 || nvars == 4, "nvars must be 2 or 4");
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert([0; 4], c);
        }
        p
    }

    /// The monomial with the given exponents (trailing entries must be zero
    /// when `nvars == 2`).
    pub fn monomial(nvars: usize, exp: Exp, c: BigRational) -> Self {
        assert!(nvars == 2 || nvars == 4);
        assert!(nvars == 4 || (exp[2] == 0 && exp[3] == 0));
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut exp = [0u32; 4];
        exp[index] = 1;
        Poly::monomial(nvars, exp, BigRational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &Exp) -> BigRational {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&[0; 4])
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Reinterpret a two-variable polynomial inside `k[x,y,u,v]`.
    pub fn lift_to_4(&self) -> Poly {
        Poly {
            nvars: 4,
            terms: self.terms.clone(),
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut terms = self.terms.clone();
        for (exp, c) in &other.terms {
            let entry = terms.entry(*exp).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(exp);
            }
        }
        Ok(Poly {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut terms: BTreeMap<Exp, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                let entry = terms.entry(exp).or_insert_with(BigRational::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    terms.remove(&exp);
                }
            }
        }
        Ok(Poly {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs)
            .expect("polynomial addition: nvars mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs)
            .expect("polynomial multiplication: nvars mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

fn fmt_coeff_times_monomial(
    f: &mut fmt::Formatter<'_>,
    c: &BigRational,
    exp: &Exp,
    nvars: usize,
) -> fmt::Result {
    let is_const = exp.iter().all(|&e| e == 0);
    if is_const {
        return write!(f, "{c}");
    }
    if !c.is_one() {
        write!(f, "{c}*")?;
    }
    let mut first = true;
    for i in 0..nvars {
        if exp[i] == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", VAR_NAMES[i])?;
        if exp[i] > 1 {
            write!(f, "^{}", exp[i])?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    /// Canonical text form; parsing it back yields an equal polynomial.
    /// Terms are printed in descending lexicographic exponent order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_coeff_times_monomial(f, &c.abs(), exp, self.nvars)?;
        }
        Ok(())
    }
}

/// The image of a polynomial in m/m^2: its coefficients of x and y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinForm {
    pub cx: BigRational,
    pub cy: BigRational,
}

impl LinForm {
    pub fn new(cx: BigRational, cy: BigRational) -> Self {
        LinForm { cx, cy }
    }

    pub fn is_zero(&self) -> bool {
        self.cx.is_zero() && self.cy.is_zero()
    }
}

/// Coefficients of x and y in a two-variable polynomial lying in m = (x, y).
pub fn linear_part(p: &Poly) -> Result<LinForm> {
    if !p.constant_term().is_zero() {
        return Err(Error::ConstantTerm);
    }
    Ok(LinForm::new(p.coeff(&[1, 0, 0, 0]), p.coeff(&[0, 1, 0, 0])))
}

/// Dimension of the rational span of two linear forms: 0, 1, or 2.
pub fn span_dim(l1: &LinForm, l2: &LinForm) -> usize {
    let det = &l1.cx * &l2.cy - &l1.cy * &l2.cx;
    if !det.is_zero() {
        2
    } else if !l1.is_zero() || !l2.is_zero() {
        1
    } else {
        0
    }
}

/// Whether p in m also lies in m^2, i.e. has vanishing linear part.
pub fn is_in_m2(p: &Poly) -> Result<bool> {
    Ok(linear_part(p)?.is_zero())
}

/// Whether p = c*q for a nonzero rational c. A scalar-multiple test is a
/// sound but incomplete proxy for being unit multiples in `k[[x,y]]`;
/// declared ideal-class labels stay authoritative.
pub fn is_unit_multiple(p: &Poly, q: &Poly) -> Result<bool> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPoly);
    }
    if p.nvars != q.nvars {
        return Err(Error::NvarsMismatch {
            left: p.nvars,
            right: q.nvars,
        });
    }
    if p.terms.len() != q.terms.len() {
        return Ok(false);
    }
    // ratio of the leading coefficients must propagate to every term
    let (lead_exp, lead_c) = p.terms.iter().next_back().expect("nonzero");
    let qc = q.terms.get(lead_exp);
    let ratio = match qc {
        Some(qc) => lead_c / qc,
        None => return Ok(false),
    };
    for (exp, c) in &p.terms {
        match q.terms.get(exp) {
            Some(qc) if *c == qc * &ratio => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// A 2x2 matrix over `k[x,y,u,v]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub entries: [[Poly; 2]; 2],
}

impl Mat2 {
    pub fn new(entries: [[Poly; 2]; 2]) -> Self {
        for row in &entries {
            for e in row {
                assert_eq!(e.nvars(), 4, "Mat2 entries live in k[x, y, u, v]");
            }
        }
        Mat2 { entries }
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let mut out: Vec<Vec<Poly>> = Vec::with_capacity(2);
        for i in 0..2 {
            let mut row = Vec::with_capacity(2);
            for j in 0..2 {
                let mut acc = Poly::zero(4);
                for k in 0..2 {
                    acc = &acc + &(&self.entries[i][k] * &other.entries[k][j]);
                }
                row.push(acc);
            }
            out.push(row);
        }
        Mat2::new([
            [out[0][0].clone(), out[0][1].clone()],
            [out[1][0].clone(), out[1][1].clone()],
        ])
    }
}

/// Check that (A, B) is a matrix factorization of f - uv: both products
/// A*B and B*A must equal (f - uv) times the identity, as exact polynomial
/// identities. `f` is a two-variable polynomial.
pub fn verify_mf(a: &Mat2, b: &Mat2, f: &Poly) -> bool {
    assert_eq!(f.nvars(), 2, "f must be a polynomial in x, y");
    let uv = Poly::monomial(4, [0, 0, 1, 1], BigRational::one());
    let target = &f.lift_to_4() - &uv;
    let zero = Poly::zero(4);
    for prod in [a.mul(b), b.mul(a)] {
        if prod.entries[0][0] != target
            || prod.entries[1][1] != target
            || prod.entries[0][1] != zero
            || prod.entries[1][0] != zero
        {
            return false;
        }
    }
    true
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, nvars: usize) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
            nvars,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn number(&mut self) -> Result<BigRational> {
        let numer = self.integer()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let denom_pos = self.pos;
            let denom = self.integer()?;
            if denom.is_zero() {
                return Err(Error::Syntax {
                    pos: denom_pos,
                    msg: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(numer, denom))
        } else {
            Ok(BigRational::from_integer(numer))
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        let pos = self.pos;
        let e = self.integer()?;
        u32::try_from(&e).map_err(|_| Error::Syntax {
            pos,
            msg: "exponent too large".into(),
        })
    }

    /// factor := number | var ('^' integer)?
    /// Returns the factor as (coefficient, exponent vector).
    fn factor(&mut self) -> Result<(BigRational, Exp)> {
        let c = match self.peek() {
            Some(b) if b.is_ascii_digit() => return Ok((self.number()?, [0; 4])),
            Some(b) => b as char,
            None => return Err(self.err("expected a term")),
        };
        let var_index = VAR_NAMES.iter().position(|&v| v == c);
        match var_index {
            Some(i) if i < self.nvars => {
                self.pos += 1;
                let mut exp = [0u32; 4];
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    exp[i] = self.exponent()?;
                } else {
                    exp[i] = 1;
                }
                Ok((BigRational::one(), exp))
            }
            Some(_) => Err(Error::VarNotAllowed {
                pos: self.pos,
                var: c,
            }),
            None => Err(self.err("expected a number or variable")),
        }
    }

    /// term := factor (['*'] factor)*
    fn term(&mut self) -> Result<(BigRational, Exp)> {
        let (mut c, mut exp) = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(b) if b.is_ascii_alphanumeric() => {}
                _ => break,
            }
            let (c2, e2) = self.factor()?;
            c *= c2;
            for i in 0..4 {
                exp[i] += e2[i];
            }
        }
        Ok((c, exp))
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut p = Poly::zero(self.nvars);
        let mut sign = BigRational::one();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -sign;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        loop {
            let (c, exp) = self.term()?;
            p = p
                .checked_add(&Poly::monomial(self.nvars, exp, &sign * c))
                .unwrap();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = BigRational::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -BigRational::one();
                }
                None => break,
                Some(_) => return Err(self.err("expected '+', '-' or end of input")),
            }
        }
        Ok(p)
    }
}

/// Parse polynomial text such as `x^2 + y`, `3*x*y - 1/2*u*v` or `0`.
/// Whitespace is ignored; `u`, `v` are rejected when `nvars == 2`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<Poly> {
    assert!(nvars == 2 || nvars == 4, "nvars must be 2 or 4");
    let mut parser = Parser::new(text, nvars);
    if parser.peek().is_none() {
        return Err(parser.err("empty input"));
    }
    parser.expr()
}
