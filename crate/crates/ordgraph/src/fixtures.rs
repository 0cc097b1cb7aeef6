//! Built-in example presentations and representations, used by the test
//! suites and handy as CLI input.

use crate::presentation::Presentation;

/// Two vertices v, w; edges e: w→v and f: v→w; level-1 atoms g and fg with
/// lasso cycles (e,f) and (f,e), related by e·fg = g and f·g = fg.
pub const E1_JSON: &str = include_str!("../fixtures/e1.json");

/// Directed graph with a loop g' at v' and an edge f' from v' to w'.
pub const F_JSON: &str = include_str!("../fixtures/f.json");

/// Acyclic directed graph: a single edge a with r(a) = p, s(a) = q, so q
/// emits nothing and p extends only through a.
pub const A2_JSON: &str = include_str!("../fixtures/a2.json");

/// Full Cuntz-Krieger representation of E1 in 2×2 Laurent matrices.
pub const E1_FULL_REP_JSON: &str = include_str!("../fixtures/e1-full.rep.json");

/// Edge-level representation of E1's directed-graph part.
pub const E1_LEVEL0_REP_JSON: &str = include_str!("../fixtures/e1-level0.rep.json");

/// The assignment with e and f as printed under the opposite product
/// convention; kept as a fixture that the verifier rejects.
pub const E1_FULL_DISPLAYED_REP_JSON: &str =
    include_str!("../fixtures/e1-full-displayed.rep.json");

/// Representation of the directed graph F.
pub const F_REP_JSON: &str = include_str!("../fixtures/f.rep.json");

pub fn e1() -> Presentation {
    Presentation::load(E1_JSON).expect("fixture E1 is valid")
}

pub fn f() -> Presentation {
    Presentation::load(F_JSON).expect("fixture F is valid")
}

pub fn a2() -> Presentation {
    Presentation::load(A2_JSON).expect("fixture A2 is valid")
}
