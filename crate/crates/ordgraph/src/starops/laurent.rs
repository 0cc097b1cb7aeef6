//! Exact *-algebra of Laurent polynomials over Gaussian rationals and
//! square matrices over them. The star operation conjugates coefficients
//! and negates exponents, matching z̄ = z⁻¹ on the unit circle.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// An exact Gaussian rational a + b·i.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat::default()
    }

    pub fn one() -> Self {
        GaussRat {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn neg(&self) -> GaussRat {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul(&self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    pub fn conj(&self) -> GaussRat {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Exact inverse; `None` for zero.
    pub fn inverse(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(GaussRat {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        })
    }

    pub fn pow(&self, k: i64) -> Option<GaussRat> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = GaussRat::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }
}

fn rat_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", rat_str(&self.re)),
            (true, false) => write!(f, "{}i", rat_str(&self.im)),
            (false, false) => {
                write!(f, "{}", rat_str(&self.re))?;
                if self.im.is_positive() {
                    write!(f, "+")?;
                }
                write!(f, "{}i", rat_str(&self.im))
            }
        }
    }
}

/// A Laurent polynomial in variables z₀..z_{nvars−1}, exponent vectors in
/// ℤ^nvars, Gaussian-rational coefficients, zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentScalar {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, GaussRat>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("syntax error in entry `{entry}`: {msg}")]
    Entry { entry: String, msg: String },
    #[error("evaluation point for `{0}` is zero; negative exponents need an invertible point")]
    ZeroPoint(String),
    #[error("missing evaluation point for variable `{0}`")]
    MissingPoint(String),
}

impl LaurentScalar {
    pub fn zero(nvars: usize) -> Self {
        LaurentScalar {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: GaussRat) -> Self {
        let mut s = LaurentScalar::zero(nvars);
        if !c.is_zero() {
            s.terms.insert(vec![0; nvars], c);
        }
        s
    }

    pub fn one(nvars: usize) -> Self {
        LaurentScalar::constant(nvars, GaussRat::one())
    }

    /// The monomial c·z₀^{e₀}…
    pub fn monomial(nvars: usize, exps: Vec<i64>, c: GaussRat) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut s = LaurentScalar::zero(nvars);
        if !c.is_zero() {
            s.terms.insert(exps, c);
        }
        s
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[idx] = 1;
        LaurentScalar::monomial(nvars, exps, GaussRat::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate `(exponent vector, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &GaussRat)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn add(&self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            let cur = out.terms.entry(e.clone()).or_insert_with(GaussRat::zero);
            *cur = cur.add(c);
            if cur.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> LaurentScalar {
        LaurentScalar {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &LaurentScalar) -> LaurentScalar {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1.mul(c2);
                let cur = out.terms.entry(e.clone()).or_insert_with(GaussRat::zero);
                *cur = cur.add(&c);
                if cur.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    /// Involution: conjugate coefficients, negate exponents.
    pub fn star(&self) -> LaurentScalar {
        LaurentScalar {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.conj()))
                .collect(),
        }
    }

    /// Substitute exact points for the variables.
    pub fn evaluate(&self, point: &[GaussRat]) -> Result<GaussRat, LaurentError> {
        let mut acc = GaussRat::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = point[i]
                    .pow(k)
                    .ok_or_else(|| LaurentError::ZeroPoint(format!("z{i}")))?;
                term = term.mul(&p);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    pub fn display(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (exps, c) in &self.terms {
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        vars[i].clone()
                    } else {
                        format!("{}^{}", vars[i], k)
                    }
                })
                .collect();
            // split mixed coefficients into a real and an imaginary term
            let mut coeffs: Vec<GaussRat> = Vec::new();
            if !c.re.is_zero() {
                coeffs.push(GaussRat {
                    re: c.re.clone(),
                    im: BigRational::zero(),
                });
            }
            if !c.im.is_zero() {
                coeffs.push(GaussRat {
                    re: BigRational::zero(),
                    im: c.im.clone(),
                });
            }
            for c in coeffs {
                if mono.is_empty() {
                    parts.push(c.to_string());
                } else {
                    parts.push(format!("{}*{}", c, mono.join("*")));
                }
            }
        }
        let mut out = String::new();
        for (i, part) in parts.iter().enumerate() {
            if i > 0 && !part.starts_with('-') {
                out.push('+');
            }
            out.push_str(part);
        }
        out
    }
}

/// Parse one matrix entry: a signed sum of terms `c`, `c*v^k`, or bare
/// `v^k` with `c` a Gaussian rational written `a`, `a/b`, `ai`, `a/b i`.
pub fn parse_entry(text: &str, vars: &[String]) -> Result<LaurentScalar, LaurentError> {
    let err = |msg: &str| LaurentError::Entry {
        entry: text.to_string(),
        msg: msg.to_string(),
    };
    let nvars = vars.len();
    let mut acc = LaurentScalar::zero(nvars);
    let s: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < s.len() && s[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if pos >= s.len() {
            if acc.is_zero() && text.trim().is_empty() {
                return Err(err("empty entry"));
            }
            break;
        }
        // sign
        let mut negative = false;
        if s[pos] == '+' || s[pos] == '-' {
            negative = s[pos] == '-';
            pos += 1;
        } else if !acc.is_zero() || pos > 0 {
            // terms after the first must be joined by a sign
            if pos > 0 {
                return Err(err("expected '+' or '-' between terms"));
            }
        }
        skip_ws(&mut pos);
        // one term: factors joined by '*', each a rational, 'i', or var^k
        let mut coeff = GaussRat::one();
        let mut exps = vec![0i64; nvars];
        loop {
            skip_ws(&mut pos);
            let start = pos;
            if pos < s.len() && s[pos].is_ascii_digit() {
                while pos < s.len() && s[pos].is_ascii_digit() {
                    pos += 1;
                }
                let numer: BigInt = s[start..pos].iter().collect::<String>().parse().unwrap();
                let mut denom = BigInt::one();
                skip_ws(&mut pos);
                if pos < s.len() && s[pos] == '/' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let dstart = pos;
                    while pos < s.len() && s[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if dstart == pos {
                        return Err(err("expected denominator digits"));
                    }
                    denom = s[dstart..pos].iter().collect::<String>().parse().unwrap();
                    if denom.is_zero() {
                        return Err(err("zero denominator"));
                    }
                }
                let mut c = GaussRat {
                    re: BigRational::new(numer, denom),
                    im: BigRational::zero(),
                };
                skip_ws(&mut pos);
                if pos < s.len() && s[pos] == 'i' {
                    pos += 1;
                    c = c.mul(&GaussRat::i());
                }
                coeff = coeff.mul(&c);
            } else if pos < s.len() && s[pos] == 'i' && !is_var_start(&s, pos, vars) {
                pos += 1;
                coeff = coeff.mul(&GaussRat::i());
            } else if let Some((vi, len)) = match_var(&s, pos, vars) {
                pos += len;
                let mut k: i64 = 1;
                skip_ws(&mut pos);
                if pos < s.len() && s[pos] == '^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let mut sign = 1i64;
                    if pos < s.len() && s[pos] == '-' {
                        sign = -1;
                        pos += 1;
                    }
                    let dstart = pos;
                    while pos < s.len() && s[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if dstart == pos {
                        return Err(err("expected exponent digits"));
                    }
                    k = sign
                        * s[dstart..pos]
                            .iter()
                            .collect::<String>()
                            .parse::<i64>()
                            .map_err(|_| err("exponent out of range"))?;
                }
                exps[vi] += k;
            } else {
                return Err(err("expected a coefficient or variable"));
            }
            skip_ws(&mut pos);
            if pos < s.len() && s[pos] == '*' {
                pos += 1;
                continue;
            }
            break;
        }
        if negative {
            coeff = coeff.neg();
        }
        acc = acc.add(&LaurentScalar::monomial(nvars, exps, coeff));
        skip_ws(&mut pos);
        if pos >= s.len() {
            break;
        }
        if s[pos] != '+' && s[pos] != '-' {
            return Err(err("expected '+' or '-' between terms"));
        }
    }
    Ok(acc)
}

fn is_var_start(s: &[char], pos: usize, vars: &[String]) -> bool {
    match_var(s, pos, vars).is_some()
}

fn match_var(s: &[char], pos: usize, vars: &[String]) -> Option<(usize, usize)> {
    // longest variable name match wins
    let mut best: Option<(usize, usize)> = None;
    for (i, v) in vars.iter().enumerate() {
        let chars: Vec<char> = v.chars().collect();
        if s.len() - pos >= chars.len() && s[pos..pos + chars.len()] == chars[..] {
            if best.map_or(true, |(_, l)| chars.len() > l) {
                best = Some((i, chars.len()));
            }
        }
    }
    best
}

/// A square matrix of Laurent scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    size: usize,
    nvars: usize,
    entries: Vec<LaurentScalar>,
}

impl LaurentMatrix {
    pub fn zero(size: usize, nvars: usize) -> Self {
        LaurentMatrix {
            size,
            nvars,
            entries: vec![LaurentScalar::zero(nvars); size * size],
        }
    }

    pub fn identity(size: usize, nvars: usize) -> Self {
        let mut m = LaurentMatrix::zero(size, nvars);
        for i in 0..size {
            *m.at_mut(i, i) = LaurentScalar::one(nvars);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn at(&self, row: usize, col: usize) -> &LaurentScalar {
        &self.entries[row * self.size + col]
    }

    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut LaurentScalar {
        &mut self.entries[row * self.size + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentScalar::is_zero)
    }

    pub fn add(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&rhs.entries) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, rhs: &LaurentMatrix) -> LaurentMatrix {
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&rhs.entries) {
            *a = a.sub(b);
        }
        out
    }

    pub fn mul(&self, rhs: &LaurentMatrix) -> Result<LaurentMatrix, LaurentError> {
        if self.size != rhs.size {
            return Err(LaurentError::SizeMismatch(self.size, rhs.size));
        }
        let mut out = LaurentMatrix::zero(self.size, self.nvars);
        for i in 0..self.size {
            for j in 0..self.size {
                let mut acc = LaurentScalar::zero(self.nvars);
                for l in 0..self.size {
                    acc = acc.add(&self.at(i, l).mul(rhs.at(l, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Conjugate transpose under the z̄ = z⁻¹ involution.
    pub fn adjoint(&self) -> LaurentMatrix {
        let mut out = LaurentMatrix::zero(self.size, self.nvars);
        for i in 0..self.size {
            for j in 0..self.size {
                *out.at_mut(i, j) = self.at(j, i).star();
            }
        }
        out
    }

    pub fn scalar_mul(&self, s: &LaurentScalar) -> LaurentMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e.mul(s);
        }
        out
    }

    pub fn evaluate(&self, point: &[GaussRat]) -> Result<LaurentMatrix, LaurentError> {
        let mut out = LaurentMatrix::zero(self.size, self.nvars);
        for i in 0..self.size {
            for j in 0..self.size {
                let v = self.at(i, j).evaluate(point)?;
                *out.at_mut(i, j) = LaurentScalar::constant(self.nvars, v);
            }
        }
        Ok(out)
    }

    pub fn display(&self, vars: &[String]) -> String {
        let rows: Vec<String> = (0..self.size)
            .map(|i| {
                let cols: Vec<String> =
                    (0..self.size).map(|j| self.at(i, j).display(vars)).collect();
                format!("[{}]", cols.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}
