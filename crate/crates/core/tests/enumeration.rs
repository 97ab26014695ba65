use aisr_core::enumerate::{self, canonical_multiset, EnumConfig};
use aisr_core::satisfaction::check;
use aisr_core::{FiniteAlgebra, Identity};

fn filter(algebras: &[FiniteAlgebra], id: &Identity) -> Vec<FiniteAlgebra> {
    algebras.iter().filter(|a| check(a, id).unwrap()).cloned().collect()
}

#[test]
fn order_four_count() {
    let r = enumerate::enumerate_ai_semirings(4, &EnumConfig::default()).unwrap();
    assert_eq!(r.count, 866);
    assert_eq!(r.algebras.len(), 866);
}

#[test]
fn structural_classes_match_general_enumeration_up_to_five() {
    let rows: Identity = "xy = xz".parse().unwrap();
    let cols: Identity = "yx = zx".parse().unwrap();
    let config = EnumConfig::default();
    let union = enumerate::count_restricted_union(5, &config).unwrap();
    for n in 1..=5 {
        let general = enumerate::enumerate_ai_semirings(n, &config).unwrap();
        let row_class = enumerate::enumerate_row_constant(n, &config).unwrap();
        let col_class = enumerate::enumerate_column_constant(n, &config).unwrap();
        let both = enumerate::enumerate_constant(n, &config).unwrap();
        assert_eq!(canonical_multiset(&row_class.algebras), canonical_multiset(&filter(&general.algebras, &rows)));
        assert_eq!(canonical_multiset(&col_class.algebras), canonical_multiset(&filter(&general.algebras, &cols)));
        let constant = filter(&filter(&general.algebras, &rows), &cols);
        assert_eq!(canonical_multiset(&both.algebras), canonical_multiset(&constant));
        let either = general.algebras.iter().filter(|a| check(a, &rows).unwrap() || check(a, &cols).unwrap()).count();
        assert_eq!(union.per_order[n - 1].union, either as u64, "order {n}");
    }
}

#[test]
fn row_constant_emissions_satisfy_the_identity() {
    let rows: Identity = "xy = xz".parse().unwrap();
    for n in 1..=5 {
        let r = enumerate::enumerate_row_constant(n, &EnumConfig::default()).unwrap();
        assert!(r.algebras.iter().all(|a| check(a, &rows).unwrap()));
        let mut forms = canonical_multiset(&r.algebras);
        forms.dedup();
        assert_eq!(forms.len() as u64, r.count);
    }
}
