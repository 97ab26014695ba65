//! Built-in algebras, loaded from the text files under `data/` with their
//! original element labels.

use crate::algebra::{format, FiniteAlgebra};
use crate::error::{Error, Result};

const SOURCES: &[(&str, &str)] = &[
    ("L2", include_str!("../data/L2.alg")),
    ("R2", include_str!("../data/R2.alg")),
    ("N2", include_str!("../data/N2.alg")),
    ("T2", include_str!("../data/T2.alg")),
    ("M2_or_D2_a", include_str!("../data/M2_or_D2_a.alg")),
    ("M2_or_D2_b", include_str!("../data/M2_or_D2_b.alg")),
    ("S7", include_str!("../data/S7.alg")),
    ("S56", include_str!("../data/S56.alg")),
    ("S58", include_str!("../data/S58.alg")),
    ("S4_475", include_str!("../data/S4_475.alg")),
    ("S4_477", include_str!("../data/S4_477.alg")),
];

/// Names accepted by [`get`], in catalog order. `trivial` is also accepted.
pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

/// Raw file text of a catalog entry.
pub fn source(name: &str) -> Option<&'static str> {
    let key = normalize(name);
    SOURCES.iter().find(|(n, _)| *n == key).map(|(_, s)| *s)
}

fn normalize(name: &str) -> String {
    let compact: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    match compact.as_str() {
        "S(4,475)" | "S_(4,475)" | "S4,475" => "S4_475".into(),
        "S(4,477)" | "S_(4,477)" | "S4,477" => "S4_477".into(),
        other => other.to_string(),
    }
}

pub fn get(name: &str) -> Result<FiniteAlgebra> {
    if name == "trivial" || name == "T1" {
        return Ok(FiniteAlgebra::trivial());
    }
    let src = source(name).ok_or_else(|| Error::Unknown(name.to_string()))?;
    format::parse(src)?.validate()
}

fn must(name: &str) -> FiniteAlgebra {
    get(name).expect("built-in catalog entries are valid ai-semirings")
}

pub fn l2() -> FiniteAlgebra {
    must("L2")
}
pub fn r2() -> FiniteAlgebra {
    must("R2")
}
pub fn n2() -> FiniteAlgebra {
    must("N2")
}
pub fn t2() -> FiniteAlgebra {
    must("T2")
}
pub fn s7() -> FiniteAlgebra {
    must("S7")
}
pub fn s56() -> FiniteAlgebra {
    must("S56")
}
pub fn s58() -> FiniteAlgebra {
    must("S58")
}
pub fn s4_475() -> FiniteAlgebra {
    must("S4_475")
}
pub fn s4_477() -> FiniteAlgebra {
    must("S4_477")
}

/// Every catalog algebra (excluding the trivial one), in catalog order.
pub fn all() -> Vec<FiniteAlgebra> {
    SOURCES.iter().map(|(n, _)| must(n)).collect()
}
