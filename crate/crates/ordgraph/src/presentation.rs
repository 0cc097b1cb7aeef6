//! Finitely presented ordinal graphs.
//!
//! A presentation lists vertices, edges (level-0 generators of degree 1),
//! atoms (level-k generators of degree ω^k carrying lasso factorization
//! data), prepend tables recording absorption relations `u·a = a'`, and
//! optional explicit tails tables disambiguating shifted lassos. Loading
//! validates the whole structure so that the category of normal-form words
//! has unique factorization at every generator cut.

use serde::Deserialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

/// Index of a vertex in a [`Presentation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

/// Index of a generator (edge or atom) in a [`Presentation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub usize);

/// Eventually periodic factorization data of an atom: the sequence
/// `prefix · cycle^∞` of its degree-ω^{k−1} factors, range end first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<GenId>,
    pub cycle: Vec<GenId>,
}

impl Lasso {
    /// Entry at position `i` of the infinite sequence.
    pub fn at(&self, i: usize) -> GenId {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Positions after which shifted sequences repeat: `|prefix| + |cycle|`.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// The sequence with the first `j` entries dropped.
    pub fn shifted(&self, j: usize) -> Lasso {
        if j <= self.prefix.len() {
            Lasso {
                prefix: self.prefix[j..].to_vec(),
                cycle: self.cycle.clone(),
            }
        } else {
            let r = (j - self.prefix.len()) % self.cycle.len();
            let mut cycle = self.cycle[r..].to_vec();
            cycle.extend_from_slice(&self.cycle[..r]);
            Lasso {
                prefix: Vec::new(),
                cycle,
            }
        }
    }

    /// Sequence with `u` prepended.
    pub fn cons(&self, u: GenId) -> Lasso {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(u);
        prefix.extend_from_slice(&self.prefix);
        Lasso {
            prefix,
            cycle: self.cycle.clone(),
        }
    }

    /// Pointwise equality of the infinite sequences. Decidable: two
    /// eventually periodic sequences agree everywhere iff they agree on the
    /// first `|p₁| + |p₂| + lcm(|c₁|, |c₂|)` positions.
    pub fn seq_eq(&self, other: &Lasso) -> bool {
        let bound = self.prefix.len() + other.prefix.len() + lcm(self.cycle.len(), other.cycle.len());
        (0..bound).all(|i| self.at(i) == other.at(i))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        a.max(b).max(1)
    } else {
        a / gcd(a, b) * b
    }
}

#[derive(Debug, Clone)]
pub struct GenData {
    pub name: String,
    /// 0 for edges, k ≥ 1 for atoms of degree ω^k.
    pub level: usize,
    pub src: VertexId,
    pub rng: VertexId,
    /// `None` exactly for edges.
    pub lasso: Option<Lasso>,
}

/// A validated finitely presented ordinal graph.
#[derive(Debug, Clone)]
pub struct Presentation {
    vertices: Vec<String>,
    gens: Vec<GenData>,
    vertex_ids: HashMap<String, VertexId>,
    gen_ids: HashMap<String, GenId>,
    max_level: usize,
    prepend: HashMap<(GenId, GenId), GenId>,
    /// Resolved tail atoms `(atom, shift) → atom` for shifts `1..=span`.
    tails: HashMap<(GenId, usize), GenId>,
}

// ---------------------------------------------------------------------------
// document schema

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    format: String,
    vertices: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
    #[serde(default)]
    atoms: BTreeMap<String, Vec<AtomDoc>>,
    #[serde(default)]
    prepend: BTreeMap<String, Vec<PrependDoc>>,
    #[serde(default)]
    tails: BTreeMap<String, Vec<TailDoc>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    name: String,
    src: String,
    rng: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomDoc {
    name: String,
    src: String,
    rng: String,
    prefix: Vec<String>,
    cycle: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrependDoc {
    left: String,
    atom: String,
    result: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TailDoc {
    atom: String,
    shift: usize,
    result: String,
}

// ---------------------------------------------------------------------------
// errors

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown name `{name}` ({context})")]
    UnknownName { name: String, context: String },
    #[error("validation failed:\n{0}")]
    Validation(ValidationReport),
}

/// One failed validation check with a minimal witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationFailure {
    /// (a) a compatible `(left, atom)` pair has no prepend entry.
    PrependTotality { left: String, atom: String },
    /// (b) `prepend(left, ·)` maps two atoms to the same result.
    LeftCancellation {
        left: String,
        atom_a: String,
        atom_b: String,
        result: String,
    },
    /// (c) `lasso(prepend(left, atom)) ≠ left·lasso(atom)`.
    LassoCompatibility {
        left: String,
        atom: String,
        result: String,
    },
    /// (d) no atom realizes a shifted lasso.
    TailMissing { atom: String, shift: usize },
    /// (d) several atoms realize a shifted lasso and no tails entry decides.
    TailAmbiguity {
        atom: String,
        shift: usize,
        candidates: Vec<String>,
    },
    /// (d) an explicit tails entry names an atom with the wrong lasso or src.
    TailEntryInvalid {
        atom: String,
        shift: usize,
        result: String,
    },
    /// (e) src/rng bookkeeping broken.
    Coherence { subject: String, detail: String },
    /// (f) folding prepend over a head word does not recover the atom.
    TailConsistency { atom: String, shift: usize, got: String },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFailure::PrependTotality { left, atom } => {
                write!(f, "prepend totality: no entry for ({left}, {atom})")
            }
            ValidationFailure::LeftCancellation {
                left,
                atom_a,
                atom_b,
                result,
            } => write!(
                f,
                "left cancellation: prepend({left}, {atom_a}) = prepend({left}, {atom_b}) = {result}"
            ),
            ValidationFailure::LassoCompatibility { left, atom, result } => write!(
                f,
                "lasso compatibility: lasso({result}) differs from {left}·lasso({atom})"
            ),
            ValidationFailure::TailMissing { atom, shift } => {
                write!(f, "tail closure: no atom matches shift {shift} of {atom}")
            }
            ValidationFailure::TailAmbiguity {
                atom,
                shift,
                candidates,
            } => write!(
                f,
                "tail ambiguity: shift {shift} of {atom} matches {} and no tails entry decides",
                candidates.join(", ")
            ),
            ValidationFailure::TailEntryInvalid { atom, shift, result } => write!(
                f,
                "tails entry ({atom}, {shift}) -> {result} is not lasso/src-consistent"
            ),
            ValidationFailure::Coherence { subject, detail } => {
                write!(f, "coherence: {subject}: {detail}")
            }
            ValidationFailure::TailConsistency { atom, shift, got } => write!(
                f,
                "tail consistency: folding head of {atom} at shift {shift} over its tail gives {got}"
            ),
        }
    }
}

/// Outcome of [`Presentation::validate`]: empty means all checks pass.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for failure in &self.failures {
            writeln!(f, "  {failure}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl Presentation {
    /// Load and fully validate a presentation document.
    pub fn load(json: &str) -> Result<Presentation, LoadError> {
        let doc: Doc = serde_json::from_str(json)?;
        if doc.format != "ordgraph-v1" {
            return Err(LoadError::Schema(format!(
                "unsupported format `{}` (expected ordgraph-v1)",
                doc.format
            )));
        }
        let p = Self::build(doc)?;
        let (report, tails) = p.run_checks();
        if !report.is_ok() {
            return Err(LoadError::Validation(report));
        }
        let mut p = p;
        p.tails = tails;
        Ok(p)
    }

    /// Re-run the structural checks (a)–(f) and report every failure.
    pub fn validate(&self) -> ValidationReport {
        self.run_checks().0
    }

    fn build(doc: Doc) -> Result<Presentation, LoadError> {
        let schema = |msg: String| LoadError::Schema(msg);
        let mut vertices = Vec::new();
        let mut vertex_ids = HashMap::new();
        for name in &doc.vertices {
            if !valid_name(name) {
                return Err(schema(format!("invalid vertex name `{name}`")));
            }
            if vertex_ids
                .insert(name.clone(), VertexId(vertices.len()))
                .is_some()
            {
                return Err(schema(format!("duplicate vertex `{name}`")));
            }
            vertices.push(name.clone());
        }

        let mut gens: Vec<GenData> = Vec::new();
        let mut gen_ids: HashMap<String, GenId> = HashMap::new();
        let lookup_vertex = |ids: &HashMap<String, VertexId>, name: &str, ctx: &str| {
            ids.get(name).copied().ok_or_else(|| LoadError::UnknownName {
                name: name.to_string(),
                context: ctx.to_string(),
            })
        };
        let push_gen = |gens: &mut Vec<GenData>,
                            gen_ids: &mut HashMap<String, GenId>,
                            data: GenData|
         -> Result<GenId, LoadError> {
            if !valid_name(&data.name) {
                return Err(LoadError::Schema(format!(
                    "invalid generator name `{}`",
                    data.name
                )));
            }
            if vertex_ids.contains_key(&data.name) {
                return Err(LoadError::Schema(format!(
                    "name `{}` used for both a vertex and a generator",
                    data.name
                )));
            }
            let id = GenId(gens.len());
            if gen_ids.insert(data.name.clone(), id).is_some() {
                return Err(LoadError::Schema(format!(
                    "duplicate generator `{}`",
                    data.name
                )));
            }
            gens.push(data);
            Ok(id)
        };

        for e in &doc.edges {
            let src = lookup_vertex(&vertex_ids, &e.src, &format!("src of edge {}", e.name))?;
            let rng = lookup_vertex(&vertex_ids, &e.rng, &format!("rng of edge {}", e.name))?;
            push_gen(
                &mut gens,
                &mut gen_ids,
                GenData {
                    name: e.name.clone(),
                    level: 0,
                    src,
                    rng,
                    lasso: None,
                },
            )?;
        }

        // atoms level by level so lasso entries can reference level k−1
        let mut levels: Vec<(usize, &Vec<AtomDoc>)> = Vec::new();
        for (k, list) in &doc.atoms {
            let k: usize = k
                .parse()
                .map_err(|_| schema(format!("atom level key `{k}` is not a number")))?;
            if k == 0 {
                return Err(schema("atom level must be ≥ 1".to_string()));
            }
            levels.push((k, list));
        }
        levels.sort_by_key(|(k, _)| *k);
        let mut max_level = 0;
        // first create all atoms so lassos may reference same-file lower atoms
        for (k, list) in &levels {
            max_level = max_level.max(*k);
            for a in *list {
                let src = lookup_vertex(&vertex_ids, &a.src, &format!("src of atom {}", a.name))?;
                let rng = lookup_vertex(&vertex_ids, &a.rng, &format!("rng of atom {}", a.name))?;
                push_gen(
                    &mut gens,
                    &mut gen_ids,
                    GenData {
                        name: a.name.clone(),
                        level: *k,
                        src,
                        rng,
                        lasso: Some(Lasso {
                            prefix: Vec::new(),
                            cycle: Vec::new(),
                        }),
                    },
                )?;
            }
        }
        // resolve lasso entries
        for (k, list) in &levels {
            for a in *list {
                let resolve = |n: &String| -> Result<GenId, LoadError> {
                    let id = gen_ids.get(n).copied().ok_or_else(|| LoadError::UnknownName {
                        name: n.clone(),
                        context: format!("lasso of atom {}", a.name),
                    })?;
                    if gens[id.0].level + 1 != *k {
                        return Err(schema(format!(
                            "lasso of level-{k} atom {} uses `{n}` of level {}",
                            a.name, gens[id.0].level
                        )));
                    }
                    Ok(id)
                };
                if a.cycle.is_empty() {
                    return Err(schema(format!("atom {} has an empty cycle", a.name)));
                }
                let prefix = a.prefix.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
                let cycle = a.cycle.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
                let id = gen_ids[&a.name];
                gens[id.0].lasso = Some(Lasso { prefix, cycle });
            }
        }

        let mut prepend = HashMap::new();
        for (k, list) in &doc.prepend {
            let k: usize = k
                .parse()
                .map_err(|_| schema(format!("prepend level key `{k}` is not a number")))?;
            for entry in list {
                let get = |n: &String, ctx: &str| {
                    gen_ids.get(n).copied().ok_or_else(|| LoadError::UnknownName {
                        name: n.clone(),
                        context: ctx.to_string(),
                    })
                };
                let left = get(&entry.left, "prepend left")?;
                let atom = get(&entry.atom, "prepend atom")?;
                let result = get(&entry.result, "prepend result")?;
                if gens[atom.0].level != k || gens[result.0].level != k {
                    return Err(schema(format!(
                        "prepend table {k}: atom `{}` / result `{}` must be level {k}",
                        entry.atom, entry.result
                    )));
                }
                if gens[left.0].level >= k {
                    return Err(schema(format!(
                        "prepend table {k}: left `{}` must have level < {k}",
                        entry.left
                    )));
                }
                if prepend.insert((left, atom), result).is_some() {
                    return Err(schema(format!(
                        "duplicate prepend entry ({}, {})",
                        entry.left, entry.atom
                    )));
                }
            }
        }

        let mut tails = HashMap::new();
        for (k, list) in &doc.tails {
            let k: usize = k
                .parse()
                .map_err(|_| schema(format!("tails level key `{k}` is not a number")))?;
            for entry in list {
                let get = |n: &String, ctx: &str| {
                    gen_ids.get(n).copied().ok_or_else(|| LoadError::UnknownName {
                        name: n.clone(),
                        context: ctx.to_string(),
                    })
                };
                let atom = get(&entry.atom, "tails atom")?;
                let result = get(&entry.result, "tails result")?;
                if gens[atom.0].level != k || gens[result.0].level != k {
                    return Err(schema(format!(
                        "tails table {k}: atoms must be level {k}"
                    )));
                }
                if entry.shift == 0 {
                    return Err(schema("tails shift must be ≥ 1".to_string()));
                }
                tails.insert((atom, entry.shift), result);
            }
        }

        Ok(Presentation {
            vertices,
            gens,
            vertex_ids,
            gen_ids,
            max_level,
            prepend,
            tails,
        })
    }

    /// All checks; returns the report and the resolved tails map.
    fn run_checks(&self) -> (ValidationReport, HashMap<(GenId, usize), GenId>) {
        let mut failures = Vec::new();
        let mut resolved: HashMap<(GenId, usize), GenId> = HashMap::new();
        let name = |g: GenId| self.gens[g.0].name.clone();

        // (e) lasso coherence: composability, cycle closure, rng agreement
        for (i, g) in self.gens.iter().enumerate() {
            let Some(lasso) = &g.lasso else { continue };
            let span = lasso.span();
            let word: Vec<GenId> = (0..span + 1).map(|j| lasso.at(j)).collect();
            for w in word.windows(2) {
                if self.gens[w[0].0].src != self.gens[w[1].0].rng {
                    failures.push(ValidationFailure::Coherence {
                        subject: g.name.clone(),
                        detail: format!(
                            "lasso entries {} and {} do not compose",
                            name(w[0]),
                            name(w[1])
                        ),
                    });
                }
            }
            let last = *lasso.cycle.last().unwrap();
            let first = lasso.cycle[0];
            if self.gens[last.0].src != self.gens[first.0].rng {
                failures.push(ValidationFailure::Coherence {
                    subject: g.name.clone(),
                    detail: "cycle does not close".to_string(),
                });
            }
            if self.gens[lasso.at(0).0].rng != g.rng {
                failures.push(ValidationFailure::Coherence {
                    subject: g.name.clone(),
                    detail: format!(
                        "rng is {} but the first lasso entry has rng {}",
                        self.vertices[g.rng.0],
                        self.vertices[self.gens[lasso.at(0).0].rng.0]
                    ),
                });
            }
            let _ = i;
        }

        // (a) totality and (e) coherence of prepend entries
        for k in 1..=self.max_level {
            for atom in self.level_gens(k) {
                for left in (0..k).flat_map(|j| self.level_gens(j)) {
                    if self.gens[left.0].src != self.gens[atom.0].rng {
                        continue;
                    }
                    match self.prepend.get(&(left, atom)) {
                        None => failures.push(ValidationFailure::PrependTotality {
                            left: name(left),
                            atom: name(atom),
                        }),
                        Some(&result) => {
                            let r = &self.gens[result.0];
                            if r.src != self.gens[atom.0].src || r.rng != self.gens[left.0].rng {
                                failures.push(ValidationFailure::Coherence {
                                    subject: format!(
                                        "prepend({}, {}) = {}",
                                        name(left),
                                        name(atom),
                                        r.name
                                    ),
                                    detail: "src/rng of result disagree with left·atom".to_string(),
                                });
                            }
                            // (c) lasso compatibility
                            if let Some(expected) = self.cons_lasso(left, atom) {
                                let got = self.gens[result.0].lasso.as_ref().unwrap();
                                if !expected.seq_eq(got) {
                                    failures.push(ValidationFailure::LassoCompatibility {
                                        left: name(left),
                                        atom: name(atom),
                                        result: r.name.clone(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }

        // (b) left cancellation
        for k in 1..=self.max_level {
            let mut seen: HashMap<(GenId, GenId), GenId> = HashMap::new();
            for (&(left, atom), &result) in &self.prepend {
                if self.gens[atom.0].level != k {
                    continue;
                }
                if let Some(&other) = seen.get(&(left, result)) {
                    failures.push(ValidationFailure::LeftCancellation {
                        left: name(left),
                        atom_a: name(other),
                        atom_b: name(atom),
                        result: name(result),
                    });
                } else {
                    seen.insert((left, result), atom);
                }
            }
        }

        // (d) + (f): tail closure and consistency
        for k in 1..=self.max_level {
            for atom in self.level_gens(k) {
                let lasso = self.gens[atom.0].lasso.clone().unwrap();
                for shift in 1..=lasso.span() {
                    let want = lasso.shifted(shift);
                    let candidates: Vec<GenId> = self
                        .level_gens(k)
                        .filter(|b| {
                            self.gens[b.0].src == self.gens[atom.0].src
                                && self.gens[b.0].lasso.as_ref().unwrap().seq_eq(&want)
                        })
                        .collect();
                    let chosen = match self.tails.get(&(atom, shift)) {
                        Some(&t) => {
                            if candidates.contains(&t) {
                                Some(t)
                            } else {
                                failures.push(ValidationFailure::TailEntryInvalid {
                                    atom: name(atom),
                                    shift,
                                    result: name(t),
                                });
                                None
                            }
                        }
                        None => match candidates.as_slice() {
                            [] => {
                                failures.push(ValidationFailure::TailMissing {
                                    atom: name(atom),
                                    shift,
                                });
                                None
                            }
                            [one] => Some(*one),
                            many => {
                                failures.push(ValidationFailure::TailAmbiguity {
                                    atom: name(atom),
                                    shift,
                                    candidates: many.iter().map(|g| name(*g)).collect(),
                                });
                                None
                            }
                        },
                    };
                    let Some(t) = chosen else { continue };
                    resolved.insert((atom, shift), t);
                    // (f) fold the head word back over the tail
                    let mut acc = t;
                    let mut ok = true;
                    for i in (0..shift).rev() {
                        let u = lasso.at(i);
                        match self.prepend.get(&(u, acc)) {
                            Some(&next) => acc = next,
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok && acc != atom {
                        failures.push(ValidationFailure::TailConsistency {
                            atom: name(atom),
                            shift,
                            got: name(acc),
                        });
                    }
                }
            }
        }

        (ValidationReport { failures }, resolved)
    }

    /// The sequence `left · lasso(atom)`; `None` when a needed lower-level
    /// prepend entry is missing (totality reports that separately).
    fn cons_lasso(&self, left: GenId, atom: GenId) -> Option<Lasso> {
        let lasso = self.gens[atom.0].lasso.as_ref().unwrap();
        let k = self.gens[atom.0].level;
        if self.gens[left.0].level + 1 == k {
            Some(lasso.cons(left))
        } else {
            // absorb into the first entry one level down
            let head = lasso.at(0);
            let new_head = *self.prepend.get(&(left, head))?;
            let mut shifted = lasso.shifted(1);
            let mut prefix = vec![new_head];
            prefix.append(&mut shifted.prefix);
            Some(Lasso {
                prefix,
                cycle: shifted.cycle,
            })
        }
    }

    // ------------------------------------------------------------------
    // accessors

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_ids.get(name).copied()
    }

    pub fn gen_ids_iter(&self) -> impl Iterator<Item = GenId> {
        (0..self.gens.len()).map(GenId)
    }

    pub fn gen(&self, name: &str) -> Option<GenId> {
        self.gen_ids.get(name).copied()
    }

    pub fn gen_data(&self, g: GenId) -> &GenData {
        &self.gens[g.0]
    }

    pub fn gen_name(&self, g: GenId) -> &str {
        &self.gens[g.0].name
    }

    pub fn level(&self, g: GenId) -> usize {
        self.gens[g.0].level
    }

    pub fn src(&self, g: GenId) -> VertexId {
        self.gens[g.0].src
    }

    pub fn rng(&self, g: GenId) -> VertexId {
        self.gens[g.0].rng
    }

    /// Maximum generator level K. All degrees lie below ω^{K+1}.
    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// Generators of exactly level `k`, in definition order.
    pub fn level_gens(&self, k: usize) -> impl Iterator<Item = GenId> + '_ {
        self.gens
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.level == k)
            .map(|(i, _)| GenId(i))
    }

    /// Level-`k` atoms (edges for k = 0), optionally filtered by range.
    pub fn atoms(&self, k: usize, range: Option<VertexId>) -> Vec<GenId> {
        self.level_gens(k)
            .filter(|g| range.map_or(true, |v| self.gens[g.0].rng == v))
            .collect()
    }

    /// `prepend(left, atom)` table lookup.
    pub fn prepend(&self, left: GenId, atom: GenId) -> Option<GenId> {
        self.prepend.get(&(left, atom)).copied()
    }

    /// Entry `i` of an atom's lasso word.
    pub fn lasso_entry(&self, atom: GenId, i: usize) -> GenId {
        self.gens[atom.0].lasso.as_ref().unwrap().at(i)
    }

    /// Resolved tail atom after dropping `shift` lasso entries; shift 0 is
    /// the atom itself. Shifts beyond one cycle period reduce periodically.
    pub fn tail_atom(&self, atom: GenId, shift: usize) -> GenId {
        if shift == 0 {
            return atom;
        }
        let lasso = self.gens[atom.0].lasso.as_ref().unwrap();
        let span = lasso.span();
        let shift = if shift <= span {
            shift
        } else {
            let p = lasso.prefix.len();
            let c = lasso.cycle.len();
            p + ((shift - p - 1) % c) + 1
        };
        self.tails[&(atom, shift)]
    }

    /// Period data of an atom's lasso: (prefix length, cycle length).
    pub fn lasso_shape(&self, atom: GenId) -> (usize, usize) {
        let lasso = self.gens[atom.0].lasso.as_ref().unwrap();
        (lasso.prefix.len(), lasso.cycle.len())
    }

    /// Least common multiple of all lasso cycle lengths (1 when no atoms).
    pub fn lasso_period_lcm(&self) -> usize {
        let mut acc = 1;
        for g in &self.gens {
            if let Some(lasso) = &g.lasso {
                acc = lcm(acc, lasso.cycle.len());
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn e1_loads_and_validates() {
        let p = Presentation::load(fixtures::E1_JSON).unwrap();
        assert!(p.validate().is_ok());
        assert_eq!(p.max_level(), 1);
        let v = p.vertex("v").unwrap();
        let w = p.vertex("w").unwrap();
        let names = |list: Vec<GenId>| -> Vec<String> {
            list.into_iter().map(|g| p.gen_name(g).to_string()).collect()
        };
        assert_eq!(names(p.atoms(1, None)), vec!["g", "fg"]);
        assert_eq!(names(p.atoms(1, Some(v))), vec!["g"]);
        assert_eq!(names(p.atoms(1, Some(w))), vec!["fg"]);
    }

    #[test]
    fn f_loads_and_has_no_atoms() {
        let p = Presentation::load(fixtures::F_JSON).unwrap();
        assert!(p.validate().is_ok());
        assert_eq!(p.max_level(), 0);
        assert!(p.atoms(1, None).is_empty());
    }

    #[test]
    fn e1_tails_are_the_lasso_rotations() {
        let p = fixtures::e1();
        let g = p.gen("g").unwrap();
        let fg = p.gen("fg").unwrap();
        assert_eq!(p.tail_atom(g, 1), fg);
        assert_eq!(p.tail_atom(g, 2), g);
        assert_eq!(p.tail_atom(g, 3), fg);
        assert_eq!(p.tail_atom(fg, 1), g);
        assert_eq!(p.tail_atom(fg, 2), fg);
    }

    #[test]
    fn deleted_prepend_entry_is_a_totality_error() {
        let mut doc: serde_json::Value = serde_json::from_str(fixtures::E1_JSON).unwrap();
        let entries = doc["prepend"]["1"].as_array_mut().unwrap();
        entries.retain(|e| e["left"] != "e");
        let err = Presentation::load(&doc.to_string()).unwrap_err();
        match err {
            LoadError::Validation(report) => {
                assert!(report.failures.iter().any(|f| matches!(
                    f,
                    ValidationFailure::PrependTotality { left, atom }
                        if left == "e" && atom == "fg"
                )));
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn shared_lasso_without_tails_is_ambiguous() {
        // two atoms with identical lassos and src, no tails table
        let json = r#"{
            "format": "ordgraph-v1",
            "vertices": ["v"],
            "edges": [{"name": "x", "src": "v", "rng": "v"}],
            "atoms": {"1": [
                {"name": "a", "src": "v", "rng": "v", "prefix": [], "cycle": ["x"]},
                {"name": "b", "src": "v", "rng": "v", "prefix": [], "cycle": ["x"]}
            ]},
            "prepend": {"1": [
                {"left": "x", "atom": "a", "result": "a"},
                {"left": "x", "atom": "b", "result": "b"}
            ]}
        }"#;
        let err = Presentation::load(json).unwrap_err();
        match err {
            LoadError::Validation(report) => {
                assert!(report
                    .failures
                    .iter()
                    .any(|f| matches!(f, ValidationFailure::TailAmbiguity { .. })));
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn shared_lasso_with_tails_entries_is_accepted() {
        let json = r#"{
            "format": "ordgraph-v1",
            "vertices": ["v"],
            "edges": [{"name": "x", "src": "v", "rng": "v"}],
            "atoms": {"1": [
                {"name": "a", "src": "v", "rng": "v", "prefix": [], "cycle": ["x"]},
                {"name": "b", "src": "v", "rng": "v", "prefix": [], "cycle": ["x"]}
            ]},
            "prepend": {"1": [
                {"left": "x", "atom": "a", "result": "a"},
                {"left": "x", "atom": "b", "result": "b"}
            ]},
            "tails": {"1": [
                {"atom": "a", "shift": 1, "result": "a"},
                {"atom": "b", "shift": 1, "result": "b"}
            ]}
        }"#;
        let p = Presentation::load(json).unwrap();
        let a = p.gen("a").unwrap();
        let b = p.gen("b").unwrap();
        assert_eq!(p.tail_atom(a, 1), a);
        assert_eq!(p.tail_atom(b, 5), b);
    }

    #[test]
    fn broken_cancellation_is_reported() {
        let json = r#"{
            "format": "ordgraph-v1",
            "vertices": ["v"],
            "edges": [{"name": "x", "src": "v", "rng": "v"}],
            "atoms": {"1": [
                {"name": "a", "src": "v", "rng": "v", "prefix": [], "cycle": ["x"]},
                {"name": "b", "src": "v", "rng": "v", "prefix": [], "cycle": ["x"]}
            ]},
            "prepend": {"1": [
                {"left": "x", "atom": "a", "result": "a"},
                {"left": "x", "atom": "b", "result": "a"}
            ]},
            "tails": {"1": [
                {"atom": "a", "shift": 1, "result": "a"},
                {"atom": "b", "shift": 1, "result": "b"}
            ]}
        }"#;
        let err = Presentation::load(json).unwrap_err();
        match err {
            LoadError::Validation(report) => {
                assert!(report
                    .failures
                    .iter()
                    .any(|f| matches!(f, ValidationFailure::LeftCancellation { .. })));
            }
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn alpha_renaming_preserves_acceptance() {
        let renamed = fixtures::E1_JSON
            .replace("\"g\"", "\"loop_atom\"")
            .replace("\"fg\"", "\"shifted_atom\"")
            .replace("\"v\"", "\"p0\"")
            .replace("\"w\"", "\"p1\"");
        let p = Presentation::load(&renamed).unwrap();
        assert!(p.validate().is_ok());
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Presentation>();
        assert_send_sync::<crate::Path>();
        assert_send_sync::<crate::Ordinal>();
        assert_send_sync::<crate::boundary::StarPath>();
        assert_send_sync::<crate::starops::Representation>();
    }

    #[test]
    fn lasso_seq_eq_matches_long_unrollings() {
        let a = Lasso {
            prefix: vec![GenId(0)],
            cycle: vec![GenId(1), GenId(2)],
        };
        let b = Lasso {
            prefix: vec![GenId(0), GenId(1), GenId(2)],
            cycle: vec![GenId(1), GenId(2)],
        };
        assert!(a.seq_eq(&b));
        for i in 0..64 {
            assert_eq!(a.at(i), b.at(i));
        }
        let c = Lasso {
            prefix: vec![],
            cycle: vec![GenId(1), GenId(2), GenId(1), GenId(2)],
        };
        assert!(a.shifted(1).seq_eq(&c));
    }
}
