//! Normal-form words, composition, degree, and factorization heads/tails
//! for the path category of a presentation.
//!
//! A path is a composable word of generators with non-increasing levels; a
//! lower-level generator is never left of a higher-level one because the
//! prepend tables absorb it. Degrees read off block lengths, so the degree
//! of a normal word is its Cantor normal form directly.

use crate::ordinal::Ordinal;
use crate::presentation::{GenId, Presentation, VertexId};
use num::BigUint;

/// A path in normal form. The empty word at a vertex is the identity there.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    range: VertexId,
    word: Vec<GenId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("generators `{left}` and `{right}` do not compose")]
    NonComposable { left: String, right: String },
    #[error("source/range mismatch composing `{left}` with `{right}`")]
    Mismatch { left: String, right: String },
    #[error("position {position} exceeds degree {degree}")]
    OutOfRange { position: String, degree: String },
    #[error("unknown generator or vertex `{0}`")]
    UnknownName(String),
    #[error("position coefficient too large to unroll")]
    PositionTooLarge,
    #[error("`{0}` is not a loop")]
    NotALoop(String),
}

impl Path {
    /// The identity path ε_v.
    pub fn empty(v: VertexId) -> Path {
        Path {
            range: v,
            word: Vec::new(),
        }
    }

    pub fn word(&self) -> &[GenId] {
        &self.word
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Range r: the vertex the path starts from.
    pub fn range(&self) -> VertexId {
        self.range
    }

    /// Source s: the vertex the path ends at.
    pub fn source(&self, p: &Presentation) -> VertexId {
        match self.word.last() {
            Some(&g) => p.src(g),
            None => self.range,
        }
    }

    pub fn display(&self, p: &Presentation) -> String {
        if self.word.is_empty() {
            format!("id:{}", p.vertex_name(self.range))
        } else {
            self.word
                .iter()
                .map(|&g| p.gen_name(g))
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// Degree functor: ω^k per level-k generator, summed left to right.
pub fn degree(p: &Presentation, a: &Path) -> Ordinal {
    let mut terms: Vec<(Ordinal, BigUint)> = Vec::new();
    for &g in &a.word {
        let k = p.level(g);
        match terms.last_mut() {
            Some((e, c)) if *e == Ordinal::from_nat(k as u64) => *c += 1u32,
            _ => terms.push((Ordinal::from_nat(k as u64), BigUint::from(1u32))),
        }
    }
    Ordinal::from_terms(terms)
}

fn cons(p: &Presentation, word: &mut Vec<GenId>, u: GenId) -> Result<(), PathError> {
    match word.first().copied() {
        None => {
            word.push(u);
            Ok(())
        }
        Some(head) => {
            if p.src(u) != p.rng(head) {
                return Err(PathError::NonComposable {
                    left: p.gen_name(u).to_string(),
                    right: p.gen_name(head).to_string(),
                });
            }
            if p.level(u) < p.level(head) {
                // absorb into the leading atom
                let a = p
                    .prepend(u, head)
                    .expect("validated presentation has total prepend tables");
                word[0] = a;
            } else {
                word.insert(0, u);
            }
            Ok(())
        }
    }
}

/// Right-to-left fold of a raw generator word into normal form.
pub fn normalize(p: &Presentation, raw: &[GenId]) -> Result<Path, PathError> {
    if raw.is_empty() {
        return Err(PathError::UnknownName("empty word".to_string()));
    }
    let mut word: Vec<GenId> = Vec::with_capacity(raw.len());
    for &u in raw.iter().rev() {
        cons(p, &mut word, u)?;
    }
    let range = p.rng(word[0]);
    Ok(Path { range, word })
}

/// Compose `a` then `b` (so `s(a) = r(b)` is required).
pub fn compose(p: &Presentation, a: &Path, b: &Path) -> Result<Path, PathError> {
    if a.source(p) != b.range() {
        return Err(PathError::Mismatch {
            left: a.display(p),
            right: b.display(p),
        });
    }
    let mut word = b.word.clone();
    for &u in a.word.iter().rev() {
        cons(p, &mut word, u)?;
    }
    let range = match word.first() {
        Some(&g) => p.rng(g),
        None => a.range,
    };
    Ok(Path { range, word })
}

fn to_usize(n: &BigUint) -> Result<usize, PathError> {
    u64::try_from(n)
        .ok()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or(PathError::PositionTooLarge)
}

/// Head word of an atom at an interior position `pos < ω^k`, appended to `out`.
fn head_within(
    p: &Presentation,
    atom: GenId,
    pos: &Ordinal,
    out: &mut Vec<GenId>,
) -> Result<(), PathError> {
    if pos.is_zero() {
        return Ok(());
    }
    let k = p.level(atom);
    debug_assert!(k >= 1);
    let (n, rest) = pos
        .divmod_omega(&Ordinal::from_nat((k - 1) as u64))
        .expect("interior position is below the atom degree");
    let n = to_usize(&n)?;
    for i in 0..n {
        out.push(p.lasso_entry(atom, i));
    }
    if !rest.is_zero() {
        head_within(p, p.lasso_entry(atom, n), &rest, out)?;
    }
    Ok(())
}

/// Tail word of an atom cut at interior position `pos < ω^k`.
fn tail_within(p: &Presentation, atom: GenId, pos: &Ordinal) -> Result<Vec<GenId>, PathError> {
    if pos.is_zero() {
        return Ok(vec![atom]);
    }
    let k = p.level(atom);
    let (n, rest) = pos
        .divmod_omega(&Ordinal::from_nat((k - 1) as u64))
        .expect("interior position is below the atom degree");
    let n = to_usize(&n)?;
    if rest.is_zero() {
        Ok(vec![p.tail_atom(atom, n)])
    } else {
        let mut word = tail_within(p, p.lasso_entry(atom, n), &rest)?;
        word.push(p.tail_atom(atom, n + 1));
        Ok(word)
    }
}

/// The unique prefix of `a` of degree `position`.
pub fn head(p: &Presentation, a: &Path, position: &Ordinal) -> Result<Path, PathError> {
    let d = degree(p, a);
    if *position > d {
        return Err(PathError::OutOfRange {
            position: position.to_string(),
            degree: d.to_string(),
        });
    }
    let mut out: Vec<GenId> = Vec::new();
    let mut rest = position.clone();
    let mut idx = 0;
    while !rest.is_zero() {
        let g = a.word[idx];
        let dg = Ordinal::omega_level(p.level(g));
        if rest >= dg {
            out.push(g);
            rest = dg.left_sub(&rest).expect("rest >= dg");
            idx += 1;
        } else {
            head_within(p, g, &rest, &mut out)?;
            rest = Ordinal::zero();
        }
    }
    Ok(match out.first() {
        Some(&g) => Path {
            range: p.rng(g),
            word: out,
        },
        None => Path::empty(a.range),
    })
}

/// The unique complement with `head · tail = a` at degree `position`.
pub fn tail(p: &Presentation, a: &Path, position: &Ordinal) -> Result<Path, PathError> {
    let d = degree(p, a);
    if *position > d {
        return Err(PathError::OutOfRange {
            position: position.to_string(),
            degree: d.to_string(),
        });
    }
    let mut rest = position.clone();
    let mut idx = 0;
    while !rest.is_zero() {
        let g = a.word[idx];
        let dg = Ordinal::omega_level(p.level(g));
        if rest >= dg {
            rest = dg.left_sub(&rest).expect("rest >= dg");
            idx += 1;
        } else {
            let mut raw = tail_within(p, g, &rest)?;
            raw.extend_from_slice(&a.word[idx + 1..]);
            return normalize(p, &raw);
        }
    }
    let word = a.word[idx..].to_vec();
    Ok(match word.first() {
        Some(&g) => Path {
            range: p.rng(g),
            word,
        },
        None => Path::empty(a.source(p)),
    })
}

/// `b ∈ aΛ`: `a` is a head of `b`.
pub fn divides(p: &Presentation, a: &Path, b: &Path) -> bool {
    let da = degree(p, a);
    if da > degree(p, b) {
        return false;
    }
    match head(p, b, &da) {
        Ok(h) => h == *a,
        Err(_) => false,
    }
}

/// Effective positions of a path: 0, all whole-generator cuts, and the
/// interior lasso positions of each atom over its prefix plus one cycle
/// period (recursively at higher levels), each with the source vertex of
/// the head at that position. Sorted ascending; includes the full degree.
pub fn effective_positions(p: &Presentation, a: &Path) -> Vec<(Ordinal, VertexId)> {
    let mut out: Vec<(Ordinal, VertexId)> = vec![(Ordinal::zero(), a.range)];
    let mut offset = Ordinal::zero();
    for &g in &a.word {
        for (delta, v) in gen_interior_positions(p, g) {
            out.push((offset.add(&delta), v));
        }
        offset = offset.add(&Ordinal::omega_level(p.level(g)));
        out.push((offset.clone(), p.src(g)));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out.dedup_by(|x, y| x.0 == y.0);
    out
}

/// Interior effective positions of a generator: `0 < δ < ω^level`, over the
/// lasso prefix plus one full cycle period, recursively into entries.
pub fn gen_interior_positions(p: &Presentation, g: GenId) -> Vec<(Ordinal, VertexId)> {
    let k = p.level(g);
    if k == 0 {
        return Vec::new();
    }
    let (pre, cyc) = p.lasso_shape(g);
    let span = pre + cyc;
    let step = Ordinal::omega_level(k - 1);
    let mut out = Vec::new();
    for j in 0..span {
        let base = step.mul(&Ordinal::from_nat(j as u64));
        for (delta, v) in gen_interior_positions(p, p.lasso_entry(g, j)) {
            out.push((base.add(&delta), v));
        }
    }
    for j in 1..=span {
        let base = step.mul(&Ordinal::from_nat(j as u64));
        out.push((base, p.rng(p.lasso_entry(g, j))));
    }
    out
}

/// Least n > 0 with `hⁿ·g = g` within the decidable bound, for a finite
/// path `g`. Unrolling past the lasso-period lcm times the word length
/// cannot reach new tail states, so absence within the bound is absence.
pub fn fixed_by_loop(p: &Presentation, h: &Path, g: &Path) -> Result<Option<usize>, PathError> {
    if h.source(p) != h.range() || h.is_empty() {
        return Err(PathError::NotALoop(h.display(p)));
    }
    if h.range() != g.range() {
        return Err(PathError::Mismatch {
            left: h.display(p),
            right: g.display(p),
        });
    }
    let bound = p.lasso_period_lcm() * (g.word.len() + h.word.len() + 1) + 1;
    let mut cur = g.clone();
    for n in 1..=bound {
        cur = compose(p, h, &cur)?;
        if cur == *g {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Parse a CLI path literal: dot-joined generator names or `id:<vertex>`.
pub fn parse_path(p: &Presentation, text: &str) -> Result<Path, PathError> {
    if let Some(v) = text.strip_prefix("id:") {
        let v = p
            .vertex(v.trim())
            .ok_or_else(|| PathError::UnknownName(v.to_string()))?;
        return Ok(Path::empty(v));
    }
    let mut raw = Vec::new();
    for part in text.split('.') {
        let part = part.trim();
        let g = p
            .gen(part)
            .ok_or_else(|| PathError::UnknownName(part.to_string()))?;
        raw.push(g);
    }
    normalize(p, &raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn e1() -> Presentation {
        fixtures::e1()
    }

    fn pp(p: &Presentation, s: &str) -> Path {
        parse_path(p, s).unwrap()
    }

    fn ord(s: &str) -> Ordinal {
        crate::ordinal::parse(s).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let p = e1();
        assert_eq!(pp(&p, "e.fg"), pp(&p, "g"));
        assert_eq!(pp(&p, "e.f").display(&p), "e.f");
        assert_eq!(pp(&p, "f.g"), pp(&p, "fg"));
        assert_eq!(pp(&p, "e.f.g"), pp(&p, "g"));
        assert!(parse_path(&p, "f.f").is_err());
    }

    #[test]
    fn compose_examples() {
        let p = e1();
        let v = p.vertex("v").unwrap();
        let ef = pp(&p, "e.f");
        let g = pp(&p, "g");
        assert_eq!(compose(&p, &ef, &g).unwrap(), g);
        assert_eq!(compose(&p, &Path::empty(v), &g).unwrap(), g);
        // extend g on the right by an edge into v: only e has range v
        let ge = compose(&p, &g, &pp(&p, "e")).unwrap();
        assert_eq!(ge.display(&p), "g.e");
        assert_eq!(degree(&p, &ge), ord("w+1"));
        assert!(compose(&p, &pp(&p, "f"), &pp(&p, "f")).is_err());
    }

    #[test]
    fn degree_examples() {
        let p = e1();
        let v = p.vertex("v").unwrap();
        assert_eq!(degree(&p, &pp(&p, "g")), ord("w"));
        assert_eq!(degree(&p, &Path::empty(v)), Ordinal::zero());
        assert_eq!(degree(&p, &pp(&p, "g.e.f")), ord("w+2"));
    }

    #[test]
    fn head_examples() {
        let p = e1();
        let g = pp(&p, "g");
        assert_eq!(head(&p, &g, &ord("2")).unwrap().display(&p), "e.f");
        assert_eq!(
            head(&p, &g, &Ordinal::zero()).unwrap(),
            Path::empty(p.vertex("v").unwrap())
        );
        assert_eq!(head(&p, &g, &Ordinal::omega()).unwrap(), g);
        assert_eq!(head(&p, &g, &ord("5")).unwrap().display(&p), "e.f.e.f.e");
        assert!(head(&p, &g, &ord("w+1")).is_err());
    }

    #[test]
    fn tail_examples() {
        let p = e1();
        let g = pp(&p, "g");
        assert_eq!(tail(&p, &g, &Ordinal::one()).unwrap(), pp(&p, "fg"));
        assert_eq!(tail(&p, &g, &ord("2")).unwrap(), g);
        assert_eq!(
            tail(&p, &g, &Ordinal::omega()).unwrap(),
            Path::empty(p.vertex("v").unwrap())
        );
        let ge = pp(&p, "g.e");
        assert_eq!(tail(&p, &ge, &Ordinal::one()).unwrap().display(&p), "fg.e");
        assert_eq!(tail(&p, &ge, &ord("w")).unwrap().display(&p), "e");
    }

    #[test]
    fn head_tail_reconstruct_at_effective_positions() {
        let p = e1();
        for lit in ["g", "fg", "g.e", "fg.e", "e.f", "g.e.f"] {
            let a = pp(&p, lit);
            for (pos, _) in effective_positions(&p, &a) {
                let h = head(&p, &a, &pos).unwrap();
                let t = tail(&p, &a, &pos).unwrap();
                assert_eq!(compose(&p, &h, &t).unwrap(), a, "cut {lit} at {pos}");
            }
        }
    }

    #[test]
    fn divides_examples() {
        let p = e1();
        assert!(divides(&p, &pp(&p, "e.f"), &pp(&p, "g")));
        assert!(!divides(&p, &pp(&p, "f"), &pp(&p, "g")));
        let a = pp(&p, "fg.e");
        assert!(divides(&p, &a, &a));
    }

    #[test]
    fn divides_matches_brute_force_witness_search() {
        // b ∈ aΛ iff some normal word x with compose(a, x) = b exists;
        // for these short fixtures every witness has word length ≤ 3
        let p = e1();
        let paths: Vec<Path> = ["g", "fg", "e.f", "f.e", "g.e", "fg.e", "e", "f"]
            .iter()
            .map(|s| pp(&p, s))
            .collect();
        let mut words: Vec<Path> = p.vertex_ids().map(Path::empty).collect();
        let mut frontier = words.clone();
        for _ in 0..3 {
            let mut next = Vec::new();
            for w in &frontier {
                for g in p.gen_ids_iter() {
                    if p.rng(g) == w.source(&p) {
                        let mut raw = w.word().to_vec();
                        raw.push(g);
                        next.push(normalize(&p, &raw).unwrap());
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        for a in &paths {
            for b in &paths {
                let brute = words
                    .iter()
                    .any(|x| compose(&p, a, x).ok().as_ref() == Some(b));
                assert_eq!(
                    divides(&p, a, b),
                    brute,
                    "divides({}, {})",
                    a.display(&p),
                    b.display(&p)
                );
            }
        }
    }

    #[test]
    fn fixed_by_loop_examples() {
        let p = e1();
        let ef = pp(&p, "e.f");
        let g = pp(&p, "g");
        assert_eq!(fixed_by_loop(&p, &ef, &g).unwrap(), Some(1));
        let f = fixtures::f();
        let loopg = pp(&f, "g'");
        assert_eq!(fixed_by_loop(&f, &loopg, &loopg).unwrap(), None);
        assert!(fixed_by_loop(&p, &pp(&p, "e"), &g).is_err());
    }

    #[test]
    fn effective_positions_of_g() {
        let p = e1();
        let g = pp(&p, "g");
        let v = p.vertex("v").unwrap();
        let w = p.vertex("w").unwrap();
        let pos = effective_positions(&p, &g);
        let expect = vec![
            (Ordinal::zero(), v),
            (Ordinal::one(), w),
            (ord("2"), v),
            (Ordinal::omega(), v),
        ];
        assert_eq!(pos, expect);
    }
}
