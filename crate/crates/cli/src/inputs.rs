//! Resolving command-line arguments into algebras, varieties and identities.

use std::fs;

use aisr_core::algebra::format;
use aisr_core::satisfaction::IdentityCatalog;
use aisr_core::variety::VarietySpec;
use aisr_core::{catalog, Error, FiniteAlgebra, Identity, Result};

/// `builtin:NAME`, a bare catalog name, `PATH`, or `PATH#NAME` for a file
/// holding several algebras.
pub fn algebra(spec: &str) -> Result<FiniteAlgebra> {
    raw_algebra(spec)?.validate()
}

fn builtin(name: &str) -> Result<FiniteAlgebra> {
    match catalog::source(name) {
        Some(src) => format::parse(src),
        None => catalog::get(name),
    }
}

/// Like [`algebra`] but without checking the axioms.
pub fn raw_algebra(spec: &str) -> Result<FiniteAlgebra> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin(name);
    }
    let (path, wanted) = match spec.split_once('#') {
        Some((p, n)) => (p, Some(n)),
        None => (spec, None),
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            // A bare name that is not a file may still be a catalog entry.
            if wanted.is_none() && (catalog::source(spec).is_some() || spec == "trivial") {
                return builtin(spec);
            }
            return Err(Error::Config(format!("cannot read `{path}`: {e}")));
        }
    };
    let all = format::parse_all(&text)?;
    let chosen = match wanted {
        Some(name) => all
            .into_iter()
            .find(|a| a.name() == Some(name))
            .ok_or_else(|| Error::Unknown(format!("no algebra named `{name}` in {path}")))?,
        None => {
            let count = all.len();
            let mut all = all;
            match count {
                1 => all.remove(0),
                0 => return Err(Error::Format { line: 1, msg: "no algebra found".into() }),
                _ => {
                    return Err(Error::Config(format!("{path} holds {count} algebras; select one with `{path}#NAME`")))
                }
            }
        }
    };
    Ok(chosen)
}

/// Comma-separated generator list, e.g. `builtin:S58,N2`.
pub fn variety(spec: &str) -> Result<VarietySpec> {
    let gens = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).map(algebra).collect::<Result<Vec<_>>>()?;
    VarietySpec::generated_by(gens)
}

/// A catalog label (`id0703`, `L`, ...) or the text of an identity.
pub fn labelled_identity(text: &str, fallback_label: &str) -> Result<(String, Identity)> {
    let catalog = IdentityCatalog::standard();
    if let Some(id) = catalog.get(text.trim()) {
        return Ok((text.trim().to_string(), id.clone()));
    }
    let id: Identity = text.parse()?;
    let label = catalog
        .entries()
        .iter()
        .find(|(_, known)| *known == id)
        .map_or_else(|| fallback_label.to_string(), |(l, _)| l.to_string());
    Ok((label, id))
}

pub fn identity(text: &str) -> Result<Identity> {
    labelled_identity(text, "").map(|(_, id)| id)
}
