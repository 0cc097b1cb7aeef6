//! Exact ordinal arithmetic below ε₀ in hereditary Cantor normal form.
//!
//! An ordinal is a finite sum `ω^{β₁}·c₁ + … + ω^{βₙ}·cₙ` with strictly
//! decreasing exponents (themselves ordinals) and positive integer
//! coefficients. The empty sum is 0. All operations are total and exact;
//! coefficients are arbitrary-precision naturals.

use num::{BigUint, One, Zero};
use std::cmp::Ordering;
use std::fmt;

/// An ordinal below ε₀ in Cantor normal form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    /// Terms `(exponent, coefficient)`, exponents strictly decreasing,
    /// coefficients ≥ 1.
    terms: Vec<(Ordinal, BigUint)>,
}

/// Error raised by [`Ordinal::left_sub`] when the minuend is smaller.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("left subtraction underflow: {a} > {b}")]
pub struct Underflow {
    pub a: String,
    pub b: String,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_nat(1u32)
    }

    pub fn omega() -> Self {
        Ordinal {
            terms: vec![(Ordinal::one(), BigUint::one())],
        }
    }

    pub fn from_nat<N: Into<BigUint>>(n: N) -> Self {
        let n = n.into();
        if n.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![(Ordinal::zero(), n)],
            }
        }
    }

    /// ω^e as a single CNF term. `omega_pow(0) = 1`.
    pub fn omega_pow(e: &Ordinal) -> Self {
        Ordinal {
            terms: vec![(e.clone(), BigUint::one())],
        }
    }

    /// ω^k for a small natural level.
    pub fn omega_level(k: usize) -> Self {
        Ordinal::omega_pow(&Ordinal::from_nat(k as u64))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` when the ordinal is a finite natural.
    pub fn nat_value(&self) -> Option<&BigUint> {
        match self.terms.as_slice() {
            [] => None, // zero is handled by the caller via is_zero
            [(e, c)] if e.is_zero() => Some(c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.is_zero() || self.nat_value().is_some()
    }

    /// Leading exponent, or `None` for 0.
    pub fn leading_exp(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Iterate `(exponent, coefficient)` pairs in decreasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Ordinal, &BigUint)> {
        self.terms.iter().map(|(e, c)| (e, c))
    }

    /// Build directly from CNF terms; asserts canonical order.
    pub fn from_terms(terms: Vec<(Ordinal, BigUint)>) -> Self {
        let o = Ordinal { terms };
        debug_assert!(o.is_canonical());
        o
    }

    fn is_canonical(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_zero())
            && self.terms.windows(2).all(|w| w[0].0 > w[1].0)
            && self.terms.iter().all(|(e, _)| e.is_canonical())
    }

    /// Ordinal sum `self + rhs`. Terms of `self` below the leading exponent
    /// of `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.leading_exp() else {
            return self.clone();
        };
        let mut terms: Vec<(Ordinal, BigUint)> = Vec::new();
        for (e, c) in &self.terms {
            match e.cmp(lead) {
                Ordering::Greater => terms.push((e.clone(), c.clone())),
                Ordering::Equal | Ordering::Less => break,
            }
        }
        let mut rhs_terms = rhs.terms.iter();
        let (e0, c0) = rhs_terms.next().expect("nonzero");
        // merge coefficient when self carries the same leading exponent
        let merged = match self.terms.iter().find(|(e, _)| e == e0) {
            Some((_, ca)) => ca + c0,
            None => c0.clone(),
        };
        terms.push((e0.clone(), merged));
        terms.extend(rhs_terms.cloned());
        Ordinal::from_terms(terms)
    }

    /// The unique `x` with `self + x = b`, defined when `self ≤ b`.
    pub fn left_sub(&self, b: &Ordinal) -> Result<Ordinal, Underflow> {
        let underflow = || Underflow {
            a: self.to_string(),
            b: b.to_string(),
        };
        let mut i = 0;
        while i < self.terms.len() && i < b.terms.len() && self.terms[i] == b.terms[i] {
            i += 1;
        }
        if i == self.terms.len() {
            // self is a prefix of b (possibly equal)
            return Ok(Ordinal::from_terms(b.terms[i..].to_vec()));
        }
        if i == b.terms.len() {
            return Err(underflow());
        }
        let (ea, ca) = &self.terms[i];
        let (eb, cb) = &b.terms[i];
        match ea.cmp(eb) {
            Ordering::Greater => Err(underflow()),
            Ordering::Less => Ok(Ordinal::from_terms(b.terms[i..].to_vec())),
            Ordering::Equal => {
                if ca > cb {
                    Err(underflow())
                } else {
                    // ca < cb: first differing position, coefficients differ
                    let mut terms = vec![(eb.clone(), cb - ca)];
                    terms.extend_from_slice(&b.terms[i + 1..]);
                    Ok(Ordinal::from_terms(terms))
                }
            }
        }
    }

    /// Ordinal product. Left-distributes over the CNF of `rhs`.
    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        if self.is_zero() || rhs.is_zero() {
            return Ordinal::zero();
        }
        let (lead_exp, lead_coeff) = &self.terms[0];
        let mut acc = Ordinal::zero();
        for (beta, n) in &rhs.terms {
            let part = if beta.is_zero() {
                // self · n = ω^{e₁}·(c₁·(n−1)) + self for finite n ≥ 1
                let nm1 = n - BigUint::one();
                if nm1.is_zero() {
                    self.clone()
                } else {
                    Ordinal::from_terms(vec![(lead_exp.clone(), lead_coeff * &nm1)]).add(self)
                }
            } else {
                // self · ω^β·n = ω^{e₁+β}·n for β ≥ 1
                Ordinal::from_terms(vec![(lead_exp.add(beta), n.clone())])
            };
            acc = acc.add(&part);
        }
        acc
    }

    /// The base-ω^k division of Lemma-style interval decompositions: when
    /// `self < ω^{k+1}`, the unique `(n, r)` with `self = ω^k·n + r` and
    /// `r < ω^k`; `None` (overflow) otherwise.
    pub fn divmod_omega(&self, k: &Ordinal) -> Option<(BigUint, Ordinal)> {
        if let Some(lead) = self.leading_exp() {
            if lead > k {
                return None;
            }
        }
        let mut quot = BigUint::zero();
        let mut rem = Vec::new();
        for (e, c) in &self.terms {
            if e == k {
                quot = c.clone();
            } else {
                // e < k here since e > k returned overflow above
                rem.push((e.clone(), c.clone()));
            }
        }
        Some((quot, Ordinal::from_terms(rem)))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Equal => {}
                ne => return ne,
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                ne => return ne,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            if *e != Ordinal::one() {
                if e.nat_value().is_some() {
                    write!(f, "^{e}")?;
                } else if *e == Ordinal::omega() {
                    write!(f, "^w")?;
                } else {
                    write!(f, "^({e})")?;
                }
            }
            if !c.is_one() {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<u32> for Ordinal {
    fn from(n: u32) -> Self {
        Ordinal::from_nat(n)
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::from_nat(n)
    }
}

/// Parse error with a byte position into the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ordinal syntax error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parse an ordinal expression.
///
/// Grammar (whitespace-insensitive):
/// ```text
/// expr := term ("+" term)*
/// term := nat | "w" ("^" base)? ("*" nat)?
/// base := nat | "w" | "(" expr ")"
/// ```
/// Non-normal sums such as `1+w` are normalized through addition.
pub fn parse(input: &str) -> Result<Ordinal, ParseError> {
    let mut p = Parser {
        s: input.as_bytes(),
        pos: 0,
    };
    let o = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(o)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ordinal, ParseError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn nat(&mut self) -> Result<BigUint, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(text.parse::<BigUint>().unwrap())
    }

    fn term(&mut self) -> Result<Ordinal, ParseError> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.eat(b'^') {
                    self.base()?
                } else {
                    Ordinal::one()
                };
                let coeff = if self.eat(b'*') {
                    let at = self.pos;
                    let n = self.nat()?;
                    if n.is_zero() {
                        return Err(ParseError {
                            pos: at,
                            msg: "zero coefficient".to_string(),
                        });
                    }
                    n
                } else {
                    BigUint::one()
                };
                Ok(Ordinal::from_terms(vec![(exp, coeff)]))
            }
            _ => Err(self.err("expected a term (nat or 'w')")),
        }
    }

    fn base(&mut self) -> Result<Ordinal, ParseError> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => Ok(Ordinal::from_nat(self.nat()?)),
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected exponent base")),
        }
    }
}
