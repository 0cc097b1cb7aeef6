//! The representable fragment of Λ*: finite paths and eventually periodic
//! infinite extensions, with boundary membership and the ω-power pump.
//!
//! An `OmegaTail(prefix, cycle)` stands for the element prefix·cycle^∞ of
//! length d(prefix) + d(cycle)·ω. Representations are reduced (primitive
//! cycle, absorbed prefix copies stripped) but two reduced forms can still
//! denote one element, so semantic equality is [`eq_star`], decided by
//! comparing heads cofinally; deduplication goes through it.

use crate::conditions;
use crate::ordinal::Ordinal;
use crate::patheng::{self, Path, PathError};
use crate::presentation::{GenId, Presentation, VertexId};

/// An element of the eventually periodic fragment of Λ*.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StarPath {
    /// A path of Λ viewed in Λ*, with L = degree + 1.
    Finite(Path),
    /// prefix·cycle^∞ with s(prefix) = r(cycle), s(cycle) = r(cycle),
    /// d(cycle) > 0; L = d(prefix) + d(cycle)·ω.
    OmegaTail { prefix: Path, cycle: Path },
}

use StarPath::{Finite, OmegaTail};

impl StarPath {
    pub fn range(&self) -> VertexId {
        match self {
            Finite(p) => p.range(),
            OmegaTail { prefix, .. } => prefix.range(),
        }
    }

    pub fn display(&self, p: &Presentation) -> String {
        match self {
            Finite(path) => path.display(p),
            OmegaTail { prefix, cycle } => {
                let cyc = cycle
                    .word()
                    .iter()
                    .map(|&g| p.gen_name(g))
                    .collect::<Vec<_>>()
                    .join(".");
                if prefix.is_empty() {
                    format!("({cyc})^w")
                } else {
                    format!("{}.({cyc})^w", prefix.display(p))
                }
            }
        }
    }
}

/// L(f): degree + 1 for finite paths, d(prefix) + d(cycle)·ω otherwise.
pub fn star_length(p: &Presentation, f: &StarPath) -> Ordinal {
    match f {
        Finite(path) => patheng::degree(p, path).add(&Ordinal::one()),
        OmegaTail { prefix, cycle } => patheng::degree(p, prefix)
            .add(&patheng::degree(p, cycle).mul(&Ordinal::omega())),
    }
}

/// Build a reduced ω-tail from raw prefix/cycle parts.
pub fn make_omega_tail(p: &Presentation, prefix: Path, cycle: Path) -> Result<StarPath, PathError> {
    if cycle.is_empty() || cycle.source(p) != cycle.range() {
        return Err(PathError::NotALoop(cycle.display(p)));
    }
    if prefix.source(p) != cycle.range() {
        return Err(PathError::Mismatch {
            left: prefix.display(p),
            right: cycle.display(p),
        });
    }
    let cycle = primitivize(p, cycle)?;
    let mut prefix = prefix;
    let mut cycle = cycle;
    loop {
        match strip_step(p, &prefix, &cycle)? {
            Some((np, nc)) => {
                prefix = np;
                cycle = nc;
            }
            None => break,
        }
    }
    Ok(OmegaTail { prefix, cycle })
}

/// Slice a normal word into the path over `word[..i]`.
fn word_slice(p: &Presentation, path: &Path, lo: usize, hi: usize) -> Path {
    if lo == hi {
        // empty slice at the junction vertex
        let v = if hi < path.word().len() {
            p.rng(path.word()[hi])
        } else {
            path.source(p)
        };
        return Path::empty(v);
    }
    patheng::normalize(p, &path.word()[lo..hi]).expect("slices of normal words are paths")
}

/// Smallest closed prefix cut b with bⁿ = cycle replaces the cycle.
fn primitivize(p: &Presentation, cycle: Path) -> Result<Path, PathError> {
    let len = cycle.word().len();
    let d = patheng::degree(p, &cycle);
    for i in 1..len {
        let b = word_slice(p, &cycle, 0, i);
        if b.source(p) != b.range() {
            continue;
        }
        let mut cur = b.clone();
        while patheng::degree(p, &cur) < d {
            cur = patheng::compose(p, &cur, &b)?;
        }
        if cur == cycle {
            return Ok(b);
        }
    }
    Ok(cycle)
}

/// One prefix-shortening move, if any applies:
/// (a) strip a trailing full cycle copy from the prefix;
/// (b) strip a copy absorbed at the prefix/cycle junction;
/// (c) rotate a cycle suffix off the prefix end.
fn strip_step(
    p: &Presentation,
    prefix: &Path,
    cycle: &Path,
) -> Result<Option<(Path, Path)>, PathError> {
    // (a)
    for i in 0..prefix.word().len() {
        let cand = word_slice(p, prefix, 0, i);
        if cand.source(p) == cycle.range()
            && patheng::compose(p, &cand, cycle)? == *prefix
        {
            return Ok(Some((cand, cycle.clone())));
        }
    }
    // (b)
    if !prefix.is_empty() {
        let u = patheng::compose(p, prefix, cycle)?;
        for i in 0..u.word().len().min(prefix.word().len()) {
            let cand = word_slice(p, &u, 0, i);
            if cand.source(p) == cycle.range() && patheng::compose(p, &cand, cycle)? == u {
                return Ok(Some((cand, cycle.clone())));
            }
        }
    }
    // (c)
    if !prefix.is_empty() {
        for j in 1..cycle.word().len() {
            let front = word_slice(p, cycle, 0, j);
            let suffix = word_slice(p, cycle, j, cycle.word().len());
            for i in 0..prefix.word().len() {
                let cand = word_slice(p, prefix, 0, i);
                if cand.source(p) == suffix.range()
                    && patheng::compose(p, &cand, &suffix)? == *prefix
                {
                    let rotated = patheng::compose(p, &suffix, &front)?;
                    return Ok(Some((cand, rotated)));
                }
            }
        }
    }
    Ok(None)
}

/// The degree-β head f(β), for β < L(f).
pub fn star_head(p: &Presentation, f: &StarPath, beta: &Ordinal) -> Result<Path, PathError> {
    let l = star_length(p, f);
    if *beta >= l {
        return Err(PathError::OutOfRange {
            position: beta.to_string(),
            degree: l.to_string(),
        });
    }
    match f {
        Finite(path) => patheng::head(p, path, beta),
        OmegaTail { prefix, cycle } => {
            let u = unroll_past(p, prefix, cycle, beta)?;
            patheng::head(p, &u, beta)
        }
    }
}

/// prefix·cycle^m with degree ≥ beta.
fn unroll_past(
    p: &Presentation,
    prefix: &Path,
    cycle: &Path,
    beta: &Ordinal,
) -> Result<Path, PathError> {
    let mut u = prefix.clone();
    let dp = patheng::degree(p, &u);
    let m = if *beta <= dp {
        0
    } else {
        let rest = dp.left_sub(beta).expect("beta > dp");
        let dc = patheng::degree(p, cycle);
        let lead = dc.leading_exp().expect("cycle degree > 0").clone();
        let (n, _) = rest
            .divmod_omega(&lead)
            .expect("beta < L bounds the residual below d(cycle)·ω");
        u64::try_from(&n)
            .ok()
            .and_then(|n| usize::try_from(n).ok())
            .ok_or(PathError::PositionTooLarge)?
            + 2
    };
    for _ in 0..m {
        u = patheng::compose(p, &u, cycle)?;
    }
    Ok(u)
}

/// Composition e·f of a finite path with a star path.
pub fn star_compose(p: &Presentation, e: &Path, f: &StarPath) -> Result<StarPath, PathError> {
    if e.source(p) != f.range() {
        return Err(PathError::Mismatch {
            left: e.display(p),
            right: f.display(p),
        });
    }
    match f {
        Finite(path) => Ok(Finite(patheng::compose(p, e, path)?)),
        OmegaTail { prefix, cycle } => {
            let new_prefix = patheng::compose(p, e, prefix)?;
            make_omega_tail(p, new_prefix, cycle.clone())
        }
    }
}

/// The complement f(β)⁻¹f with star_compose(f(β), ·) = f.
pub fn star_tail(p: &Presentation, f: &StarPath, beta: &Ordinal) -> Result<StarPath, PathError> {
    let l = star_length(p, f);
    if *beta >= l {
        return Err(PathError::OutOfRange {
            position: beta.to_string(),
            degree: l.to_string(),
        });
    }
    match f {
        Finite(path) => Ok(Finite(patheng::tail(p, path, beta)?)),
        OmegaTail { prefix, cycle } => {
            let u = unroll_past(p, prefix, cycle, beta)?;
            let new_prefix = patheng::tail(p, &u, beta)?;
            make_omega_tail(p, new_prefix, cycle.clone())
        }
    }
}

/// Semantic equality in Λ*: equal lengths and heads agreeing cofinally.
/// For eventually periodic data, agreement at one alignment past the
/// burn-in and state period decides all later alignments.
pub fn eq_star(p: &Presentation, f1: &StarPath, f2: &StarPath) -> bool {
    match (f1, f2) {
        (Finite(a), Finite(b)) => a == b,
        (Finite(_), OmegaTail { .. }) | (OmegaTail { .. }, Finite(_)) => false,
        (
            OmegaTail {
                prefix: p1,
                cycle: c1,
            },
            OmegaTail {
                prefix: p2,
                cycle: c2,
            },
        ) => {
            if star_length(p, f1) != star_length(p, f2) {
                return false;
            }
            let m = p1.word().len()
                + p2.word().len()
                + c1.word().len() * c2.word().len() * p.lasso_period_lcm()
                + 4;
            let beta = patheng::degree(p, p1)
                .add(&patheng::degree(p, c1).mul(&Ordinal::from_nat(m as u64)));
            match (star_head(p, f1, &beta), star_head(p, f2, &beta)) {
                (Ok(h1), Ok(h2)) => h1 == h2,
                _ => false,
            }
        }
    }
}

/// Effective positions of a star path with the vertex visited at each:
/// the prefix positions and one cycle period past them.
pub fn star_positions(p: &Presentation, f: &StarPath) -> Vec<(Ordinal, VertexId)> {
    match f {
        Finite(path) => patheng::effective_positions(p, path),
        OmegaTail { prefix, cycle } => {
            let mut out = patheng::effective_positions(p, prefix);
            let dp = patheng::degree(p, prefix);
            let dc = patheng::degree(p, cycle);
            for (delta, v) in patheng::effective_positions(p, cycle) {
                if delta < dc {
                    out.push((dp.add(&delta), v));
                }
            }
            out.sort_by(|x, y| x.0.cmp(&y.0));
            out.dedup_by(|x, y| x.0 == y.0);
            out
        }
    }
}

/// Boundary membership: past every k-regular vertex visited at position γ
/// the path keeps going for at least ω^k, i.e. L(f) > γ + ω^k.
pub fn is_boundary(p: &Presentation, f: &StarPath) -> bool {
    let l = star_length(p, f);
    for (gamma, v) in star_positions(p, f) {
        for k in 0..=p.max_level() {
            if conditions::is_regular(p, v, k) {
                let needed = gamma.add(&Ordinal::omega_level(k));
                if needed >= l {
                    return false;
                }
            }
        }
    }
    true
}

/// h^ω for a loop h: the ω-tail with empty prefix and cycle h.
pub fn omega_power(p: &Presentation, h: &Path) -> Result<StarPath, PathError> {
    if h.is_empty() || h.source(p) != h.range() {
        return Err(PathError::NotALoop(h.display(p)));
    }
    make_omega_tail(p, Path::empty(h.range()), h.clone())
}

/// Greedy maximal extension from a vertex within the eventually periodic
/// class: always extend by the highest-level generator available (least
/// name on ties); a repeated (vertex, choice) state closes the ω-tail.
pub fn maximal_extension(p: &Presentation, v: VertexId) -> StarPath {
    let mut trace: Vec<(VertexId, GenId)> = Vec::new();
    let mut cur = v;
    loop {
        let choice = p
            .gen_ids_iter()
            .filter(|&u| p.rng(u) == cur)
            .max_by(|&a, &b| {
                p.level(a)
                    .cmp(&p.level(b))
                    .then_with(|| p.gen_name(b).cmp(p.gen_name(a)))
            });
        let Some(u) = choice else {
            let raw: Vec<GenId> = trace.iter().map(|&(_, g)| g).collect();
            let path = if raw.is_empty() {
                Path::empty(v)
            } else {
                patheng::normalize(p, &raw).expect("greedy extensions compose")
            };
            return Finite(path);
        };
        if let Some(idx) = trace.iter().position(|&(vtx, g)| vtx == cur && g == u) {
            let pre_raw: Vec<GenId> = trace[..idx].iter().map(|&(_, g)| g).collect();
            let cyc_raw: Vec<GenId> = trace[idx..].iter().map(|&(_, g)| g).collect();
            let prefix = if pre_raw.is_empty() {
                Path::empty(v)
            } else {
                patheng::normalize(p, &pre_raw).expect("greedy extensions compose")
            };
            let cycle = patheng::normalize(p, &cyc_raw).expect("greedy extensions compose");
            return make_omega_tail(p, prefix, cycle).expect("closed by construction");
        }
        trace.push((cur, u));
        cur = p.src(u);
    }
}

/// All boundary star paths from `v` with prefix/cycle word lengths within
/// the bounds, deduplicated by semantic equality and sorted by display.
pub fn enumerate_boundary(
    p: &Presentation,
    v: VertexId,
    prefix_bound: usize,
    cycle_bound: usize,
) -> Vec<StarPath> {
    let prefixes = words_from(p, v, prefix_bound);
    let mut out: Vec<StarPath> = Vec::new();
    let push = |cand: StarPath, p: &Presentation, out: &mut Vec<StarPath>| {
        if is_boundary(p, &cand) && !out.iter().any(|x| eq_star(p, x, &cand)) {
            out.push(cand);
        }
    };
    for pre in &prefixes {
        push(Finite(pre.clone()), p, &mut out);
        if cycle_bound == 0 {
            continue;
        }
        for cyc in words_from(p, pre.source(p), cycle_bound) {
            if cyc.is_empty() || cyc.source(p) != cyc.range() {
                continue;
            }
            if let Ok(tail) = make_omega_tail(p, pre.clone(), cyc) {
                push(tail, p, &mut out);
            }
        }
    }
    out.sort_by_key(|f| f.display(p));
    out
}

/// Normal words from `v` with word length ≤ bound, including ε_v.
fn words_from(p: &Presentation, v: VertexId, bound: usize) -> Vec<Path> {
    let mut out = vec![Path::empty(v)];
    let mut frontier = out.clone();
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in &frontier {
            for g in p.gen_ids_iter() {
                if p.rng(g) == w.source(p) {
                    let mut raw = w.word().to_vec();
                    raw.push(g);
                    let ext = patheng::normalize(p, &raw).expect("extension composes");
                    if ext.word().len() <= bound && !out.contains(&ext) {
                        out.push(ext.clone());
                        next.push(ext);
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

/// Least n > 0 with hⁿ·g = g for a star path g, within the periodicity
/// bound; `None` means no n exists.
pub fn fixed_by_loop(
    p: &Presentation,
    h: &Path,
    g: &StarPath,
) -> Result<Option<usize>, PathError> {
    if h.is_empty() || h.source(p) != h.range() {
        return Err(PathError::NotALoop(h.display(p)));
    }
    if h.range() != g.range() {
        return Err(PathError::Mismatch {
            left: h.display(p),
            right: g.display(p),
        });
    }
    let glen = match g {
        Finite(path) => path.word().len(),
        OmegaTail { prefix, cycle } => prefix.word().len() + cycle.word().len(),
    };
    let bound = p.lasso_period_lcm() * (glen + h.word().len() + 1) + 1;
    let mut cur = g.clone();
    for n in 1..=bound {
        cur = star_compose(p, h, &cur)?;
        if eq_star(p, &cur, g) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Parse a star-path literal: `prefix.(cycle)^w`, `(cycle)^w`, or a finite
/// path literal (see [`patheng::parse_path`]).
pub fn parse_star(p: &Presentation, text: &str) -> Result<StarPath, PathError> {
    let text = text.trim();
    match text.find('(') {
        None => Ok(Finite(patheng::parse_path(p, text)?)),
        Some(open) => {
            let rest = &text[open + 1..];
            let close = rest
                .find(')')
                .ok_or_else(|| PathError::UnknownName(text.to_string()))?;
            if !rest[close + 1..].trim_start().starts_with("^w") {
                return Err(PathError::UnknownName(text.to_string()));
            }
            let cycle = patheng::parse_path(p, &rest[..close])?;
            let prefix_text = text[..open].trim().trim_end_matches('.');
            let prefix = if prefix_text.is_empty() {
                Path::empty(cycle.range())
            } else {
                patheng::parse_path(p, prefix_text)?
            };
            make_omega_tail(p, prefix, cycle)
        }
    }
}
