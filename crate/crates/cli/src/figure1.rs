//! The ten-variety lattice check: builds the lattice from catalog generators
//! and grades each structural claim.

use std::collections::BTreeSet;

use aisr_core::satisfaction::{satisfies, IdentityCatalog};
use aisr_core::variety::{
    build_lattice, compare, dual_specs, member, standard_specs, Relation, VarietyLattice, VarietySpec, REFERENCE_HASSE,
};
use aisr_core::{canonical_form, catalog, FiniteAlgebra, Result};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Figure1 {
    pub dual: bool,
    pub substitutions: Vec<(String, String)>,
    pub claims: Vec<Claim>,
    pub lattice: VarietyLattice,
    #[serde(skip)]
    pub dot: String,
}

impl Figure1 {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn claim_lines(&self) -> String {
        self.claims
            .iter()
            .map(|c| format!("{} {}: {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    }
}

/// Label of the dual variety in the mirrored list.
pub fn dual_label(s: &str) -> String {
    if s == "R" {
        return "C".into();
    }
    s.replace("L2", "R2").replace("S58", "S56")
}

fn claim(name: &str, pass: bool, detail: impl Into<String>) -> Claim {
    Claim { name: name.into(), pass, detail: detail.into() }
}

fn substitute(specs: Vec<VarietySpec>, subs: &[(String, String)]) -> Result<Vec<VarietySpec>> {
    let mut out = specs;
    for (old, new) in subs {
        let from = canonical_form(&catalog::get(old)?).tables;
        let to = catalog::get(new)?;
        out = out
            .into_iter()
            .map(|s| {
                let gens: Vec<FiniteAlgebra> = s
                    .generators
                    .into_iter()
                    .map(|g| if canonical_form(&g).tables == from { to.clone() } else { g })
                    .collect();
                VarietySpec::new(s.label.replace(old.as_str(), new), gens)
            })
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(out)
}

fn rename(name: &str, dual: bool, subs: &[(String, String)]) -> String {
    let mut s = if dual { dual_label(name) } else { name.to_string() };
    for (old, new) in subs {
        s = s.replace(old.as_str(), new);
    }
    s
}

fn names(lat: &VarietyLattice, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| lat.labels[i].clone()).collect()
}

pub fn run(dual: bool, subs: &[(String, String)]) -> Result<Figure1> {
    let base = if dual { dual_specs() } else { standard_specs() };
    let specs = substitute(base, subs)?;
    let lat = build_lattice(&specs)?;
    let mut claims = Vec::new();

    let ambient_label = if dual { "id0703_dual" } else { "id0703" };
    let ambient = IdentityCatalog::standard().get(ambient_label).expect("catalog label").clone();
    let mut outside = Vec::new();
    let mut seen = BTreeSet::new();
    for s in &specs {
        for g in &s.generators {
            if !seen.insert(canonical_form(g).tables) {
                continue;
            }
            let r = satisfies(g, &ambient)?;
            if let Some(cx) = r.counterexample {
                let at: Vec<String> = cx.assignment.iter().map(|(v, e)| format!("{v}={}", g.label(*e))).collect();
                outside.push(format!(
                    "{} fails {ambient} at {} ({} vs {})",
                    g.display_name(),
                    at.join(", "),
                    g.label(cx.lhs_value),
                    g.label(cx.rhs_value)
                ));
            }
        }
    }
    claims.push(claim(
        "generators-in-ambient",
        outside.is_empty(),
        if outside.is_empty() { format!("every generator satisfies {ambient}") } else { outside.join("; ") },
    ));

    let dups: Vec<String> =
        lat.duplicates.iter().map(|&(i, j)| format!("{} = {}", lat.labels[i], lat.labels[j])).collect();
    claims.push(claim(
        "pairwise-distinct",
        dups.is_empty(),
        if dups.is_empty() { format!("{} distinct varieties", lat.labels.len()) } else { dups.join(", ") },
    ));

    let reference: BTreeSet<(String, String)> =
        REFERENCE_HASSE.iter().map(|(a, b)| (rename(a, dual, subs), rename(b, dual, subs))).collect();
    let got: BTreeSet<(String, String)> = lat.hasse_labels().into_iter().collect();
    let missing: Vec<String> = reference.difference(&got).map(|(a, b)| format!("{a} < {b}")).collect();
    let extra: Vec<String> = got.difference(&reference).map(|(a, b)| format!("{a} < {b}")).collect();
    let hasse_ok = missing.is_empty() && extra.is_empty();
    claims.push(claim(
        "hasse-diagram",
        hasse_ok,
        if hasse_ok {
            format!("{} covering pairs match the reference", got.len())
        } else {
            format!("missing [{}], unexpected [{}]", missing.join(", "), extra.join(", "))
        },
    ));

    let escapes: Vec<String> = lat
        .escapes
        .iter()
        .map(|e| format!("join of {} and {} is not listed", lat.labels[e.left], lat.labels[e.right]))
        .collect();
    claims.push(claim(
        "joins-closed",
        escapes.is_empty(),
        if escapes.is_empty() {
            "every pairwise join is one of the listed varieties".into()
        } else {
            escapes.join("; ")
        },
    ));

    claims.push(claim(
        "distributive",
        lat.distributive == Some(true),
        match lat.distributive {
            Some(true) => "meets distribute over joins".to_string(),
            Some(false) => "some meet fails to distribute over a join".to_string(),
            None => "not a lattice; some meet or join is missing".to_string(),
        },
    ));

    let atoms: BTreeSet<String> = names(&lat, &lat.atoms).into_iter().collect();
    let want: BTreeSet<String> = ["V(L2)", "V(N2)", "V(T2)"].iter().map(|a| rename(a, dual, subs)).collect();
    claims.push(claim("atoms", atoms == want, format!("atoms {}", atoms.into_iter().collect::<Vec<_>>().join(", "))));

    let order_ok = lat.is_lattice() && lat.labels.len() == 10;
    claims.push(claim("order-10", order_ok, format!("{} elements, lattice: {}", lat.labels.len(), lat.is_lattice())));

    claims.extend(generator_claims(&specs, dual, subs)?);

    let dot = lat.to_dot();
    Ok(Figure1 { dual, substitutions: subs.to_vec(), claims, lattice: lat, dot })
}

fn generator_claims(specs: &[VarietySpec], dual: bool, subs: &[(String, String)]) -> Result<Vec<Claim>> {
    let get = |n: &str| catalog::get(&rename(n, dual, subs));
    let big = if dual { catalog::get("S4_477")? } else { catalog::get("S4_475")? };
    let s58 = get("S58")?;
    let n2 = get("N2")?;
    let top_label = rename("R", dual, subs);
    let top = specs
        .iter()
        .find(|s| s.label == top_label)
        .cloned()
        .map_or_else(|| VarietySpec::new(top_label.clone(), vec![big.clone()]), Ok)?;
    let pair = VarietySpec::generated_by(vec![s58.clone(), n2.clone()])?;
    let single = VarietySpec::generated_by(vec![big.clone()])?;

    let mut out = Vec::new();
    let cmp = compare(&single, &pair)?;
    let mut detail = cmp.relation.describe(&single.label, &pair.label);
    for e in &cmp.evidence {
        detail.push_str(&format!("; {} is outside {}: {}", e.generator, e.outside, e.identity));
    }
    out.push(claim("generator-equality", cmp.relation == Relation::Equal, detail));

    for (a, v) in [(&s58, &top), (&n2, &top), (&big, &pair)] {
        let r = member(a, v)?;
        let detail = match &r.separating_identity {
            None => format!("{} in {}", a.display_name(), v.label),
            Some(id) => format!("{} not in {}: fails {id}", a.display_name(), v.label),
        };
        out.push(claim("generator-membership", r.member, detail));
    }
    Ok(out)
}
