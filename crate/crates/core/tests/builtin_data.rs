mod common;

use cellhom::combinatorics::{census, enumerate_matchings};
use cellhom::datasets::{
    builtin_chains, corrected_text, load_builtin, load_corrected_cd3, reconcile, resolve,
    source_text, top_cell_matchings, ComplexName, Encoding, Side,
};
use cellhom::filtration::{
    e1_page, monotonicity_violations, multiplicity_key, multiplicity_mismatches,
    type_subcomplex_check, Filtration,
};
use cellhom::{
    in_span, parse_chains, parse_chc, serialize_chc, CellType, Chain, ChainComplex, ComplexError,
};
use common::{dense_boundary, naive_betti, naive_rank};

fn cd1() -> ChainComplex {
    load_builtin(ComplexName::CD1, Encoding::Formulas).unwrap()
}

fn cd2() -> ChainComplex {
    load_builtin(ComplexName::CD2, Encoding::Formulas).unwrap()
}

fn cd3() -> ChainComplex {
    load_corrected_cd3().unwrap()
}

fn cd3_matrices() -> ChainComplex {
    load_builtin(ComplexName::CD3, Encoding::Matrices).unwrap()
}

fn cd3_formulas() -> ChainComplex {
    load_builtin(ComplexName::CD3, Encoding::Formulas).unwrap()
}

fn chains(name: &str) -> Vec<Chain> {
    parse_chains(builtin_chains(name).unwrap())
        .unwrap()
        .into_iter()
        .map(|e| e.chain)
        .collect()
}

fn of_degree(cs: &[Chain], d: usize) -> Vec<Chain> {
    cs.iter().filter(|c| c.degree == d).cloned().collect()
}

fn counts(x: &ChainComplex) -> Vec<usize> {
    (0..=x.max_degree()).map(|d| x.cell_count(d)).collect()
}

#[test]
fn cd1_is_the_four_cell_complex() {
    let x = cd1();
    assert_eq!(x.total_cells(), 4);
    assert_eq!(counts(&x), [1, 2, 1]);
    assert!(x.is_valid());
    assert_eq!(x.betti().unwrap().betti_numbers(), [1, 1, 0]);
    assert_eq!(x.euler(), 0);
    // H_1 is generated by the chord through the marked point.
    assert!(x
        .verify_homology_basis(1, &[Chain::new(1, ["bar_chord"])])
        .unwrap());
    assert!(!x
        .verify_homology_basis(1, &[Chain::new(1, ["star"])])
        .unwrap());
}

#[test]
fn cd2_homology_and_generators() {
    let x = cd2();
    assert_eq!(x.total_cells(), 28);
    assert_eq!(counts(&x), [1, 5, 10, 9, 3]);
    assert_eq!(census(&x).totals(), [1, 5, 10, 9, 3]);
    assert!(x.is_valid());
    let b = x.betti().unwrap().betti_numbers();
    assert_eq!(b, [1, 1, 1, 1, 0]);
    assert_eq!(b, naive_betti(&x));
    assert_eq!(x.euler(), 0);

    let g = chains("cd2_generators");
    for d in 1..=3 {
        assert!(
            x.verify_homology_basis(d, &of_degree(&g, d)).unwrap(),
            "degree {d}"
        );
    }
    assert!(x.is_cycle(&Chain::new(2, ["q2_9", "q2_10"])).unwrap());
    assert!(x
        .verify_homology_basis(1, &[Chain::new(1, ["q1_5"])])
        .unwrap());
    // Each double-chord cell alone is not a cycle.
    assert!(!x.is_cycle(&Chain::new(2, ["q2_9"])).unwrap());
}

#[test]
fn cd2_multiplicity_three_cells() {
    let x = cd2();
    let low: Vec<&str> = x
        .all_cells()
        .filter(|c| c.multiplicity == Some(3))
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(low.len(), 8);
    assert!(multiplicity_mismatches(&x).is_empty());
    let sub = x.subcomplex(|c| c.multiplicity == Some(3)).unwrap();
    assert_eq!(sub.total_cells(), 8);
    assert_eq!(sub.betti().unwrap().betti_numbers(), [1, 1, 0, 0, 0]);
    assert_eq!(
        x.relative_betti(|c| c.multiplicity == Some(3)).unwrap(),
        [0, 1, 2, 1, 0]
    );
}

#[test]
fn cd3_inventory() {
    let x = cd3_matrices();
    assert_eq!(counts(&x), [1, 7, 29, 67, 85, 56, 15]);
    let c = census(&x);
    assert_eq!(c.first, [0, 1, 6, 23, 44, 41, 15]);
    assert_eq!(c.second, [1, 6, 23, 44, 41, 15, 0]);
    assert_eq!((c.first_total(), c.second_total()), (130, 130));
    for cell in x.all_cells().filter(|c| c.type_tag == CellType::First) {
        let bar = x.cell(&format!("bar_{}", cell.name)).expect("paired cell");
        assert_eq!(bar.degree + 1, cell.degree);
        assert_eq!(bar.class_tag, cell.class_tag);
        assert_eq!(bar.type_tag, CellType::Second);
    }
    assert!(multiplicity_mismatches(&x).is_empty());
    assert!(multiplicity_mismatches(&cd3_formulas()).is_empty());
}

#[test]
fn cd3_ranks_agree_with_naive_elimination() {
    let x = cd3_matrices();
    let expected = [0, 6, 21, 44, 41, 15];
    for d in 1..=6 {
        let naive = naive_rank(&dense_boundary(&x, d));
        assert_eq!(naive, expected[d - 1], "oracle rank of d{d}");
        assert_eq!(x.boundary(d).rank(), naive, "rank of d{d}");
    }
    assert_eq!(x.boundary(2).n_rows(), 7);
    assert_eq!(x.boundary(2).n_cols(), 29);
}

#[test]
fn cd3_boundary_squares_to_zero() {
    let x = cd3_matrices();
    let p = x.boundary(2).mul(x.boundary(3)).unwrap();
    assert_eq!((p.n_rows(), p.n_cols()), (7, 67));
    assert!(p.is_zero());
    assert!(x.is_valid());
    assert!(cd3().is_valid());
}

#[test]
fn cd3_homology() {
    let x = cd3();
    let r = x.betti().unwrap();
    assert_eq!(r.betti_numbers(), [1, 1, 2, 2, 0, 0, 0]);
    assert_eq!(r.betti_numbers(), naive_betti(&x));
    assert_eq!(r.euler_characteristic, 0);
    for h in &r.degrees {
        assert_eq!(h.betti + h.rank_in + h.rank_out, h.cells);
    }
    let alt: i64 = r
        .betti_numbers()
        .iter()
        .enumerate()
        .map(|(d, b)| if d % 2 == 0 { *b as i64 } else { -(*b as i64) })
        .sum();
    assert_eq!(alt, x.euler());
}

#[test]
fn cd3_homology_generators() {
    let x = cd3();
    let g = chains("cd3_homology");
    for d in 1..=3 {
        assert!(
            x.verify_homology_basis(d, &of_degree(&g, d)).unwrap(),
            "degree {d}"
        );
    }
    for alt in ["bar_Om_2", "bar_Th"] {
        assert!(x.verify_homology_basis(1, &[Chain::new(1, [alt])]).unwrap());
    }
    let cyc = Chain::new(3, ["bar_d", "bar_k_1_m", "bar_k_2_m", "bar_h_p"]);
    assert!(x.is_cycle(&cyc).unwrap());
    let h = x
        .chain_vector(&Chain::new(3, ["bar_h_p", "bar_h_m"]))
        .unwrap();
    let d4 = x.boundary(4);
    let cols: Vec<_> = (0..d4.n_cols()).map(|j| d4.column(j)).collect();
    assert!(!in_span(&h, &cols).unwrap());
    // Boundaries are cycles but carry the zero class.
    let top = x.boundary_chain(&Chain::new(4, ["d"])).unwrap();
    assert!(x.is_cycle(&top).unwrap());
    assert!(!x.verify_homology_basis(3, &[top]).unwrap());
}

#[test]
fn cd3_kernel_of_d2() {
    let x = cd3();
    assert_eq!(x.cycle_rank(2), 23);
    let k = chains("cd3_ker2");
    assert_eq!(k.len(), 23);
    assert!(x.verify_kernel_list(2, &k).unwrap());
    // The last item as printed uses 1-cells in a 2-chain.
    let printed = Chain::new(2, ["bar_Om_1", "bar_Lam", "bar_Z_1_p", "bar_Z_2_p"]);
    let mut with_printed = k.clone();
    with_printed[22] = printed;
    assert!(matches!(
        x.verify_kernel_list(2, &with_printed),
        Err(ComplexError::WrongDegree { .. })
    ));
    // The corrected item is the boundary of Z_1_p.
    let dz = x.boundary_chain(&Chain::new(3, ["Z_1_p"])).unwrap();
    assert_eq!(dz, k[22]);
}

#[test]
fn cd3_kernel_of_d3_under_both_readings() {
    let x = cd3();
    assert_eq!(x.cycle_rank(3), 46);
    assert_eq!(x.boundary(3).kernel_basis().len(), 46);

    let printed = chains("cd3_ker3_printed");
    assert_eq!(printed.len(), 46);
    assert_eq!(printed[41].support.len(), 4);
    let p = x.check_kernel_list(3, &printed).unwrap();
    assert_eq!(p.non_cycles, [41]);
    assert!(!p.passed());

    let fixed = chains("cd3_ker3");
    assert_eq!(fixed[41].support.len(), 6);
    assert!(fixed[41].support.contains("bar_k_2_p"));
    assert!(x.verify_kernel_list(3, &fixed).unwrap());
}

#[test]
fn cd3_encodings_reconcile() {
    let f = cd3_formulas();
    let m = cd3_matrices();
    let bad = f.validate();
    assert!(!bad.is_empty());
    let d = reconcile(&f, &m).unwrap();
    let found: Vec<(usize, &str, &str, Side)> = d
        .iter()
        .map(|x| (x.degree, x.higher.as_str(), x.lower.as_str(), x.present_in))
        .collect();
    assert_eq!(
        found,
        [
            (2, "bar_V_2", "bar_Ups_1", Side::B),
            (4, "bar_C_35", "bar_k_2_m", Side::B)
        ]
    );
    let r = resolve(&f, &m, &d).unwrap();
    assert!(r.complex.is_valid());
    for e in &r.entries {
        assert!(e.present);
        assert!(!e.ambiguous);
    }
    let c = cd3();
    assert!(reconcile(&r.complex, &c).unwrap().is_empty());
    assert!(reconcile(&c, &m).unwrap().is_empty());
    assert!(reconcile(&c, &c).unwrap().is_empty());
}

#[test]
fn unbarred_top_boundaries_are_consistent() {
    let x = cd3();
    for name in ["E_plus", "A_32"] {
        let b = x.boundary_of_cell(name).unwrap();
        assert!(!b.is_empty());
        assert!(b.iter().all(|n| !n.starts_with("bar_")), "{name}: {b:?}");
    }
}

#[test]
fn top_cells_match_chord_diagrams() {
    let x = cd3();
    let table = top_cell_matchings();
    let names: Vec<&str> = x.cells(6).iter().map(|c| c.name.as_str()).collect();
    let listed: Vec<&str> = table.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, listed);
    let ms: Vec<_> = table.into_iter().map(|(_, m)| m).collect();
    assert_eq!(ms, enumerate_matchings(3));
}

#[test]
fn files_round_trip() {
    let mut texts = vec![corrected_text()];
    for (n, e) in [
        (ComplexName::CD1, Encoding::Formulas),
        (ComplexName::CD2, Encoding::Formulas),
        (ComplexName::CD3, Encoding::Formulas),
        (ComplexName::CD3, Encoding::Matrices),
    ] {
        texts.push(source_text(n, e).unwrap());
    }
    for t in texts {
        let x = parse_chc(t).unwrap();
        let s = serialize_chc(&x);
        let y = parse_chc(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(serialize_chc(&y), s);
    }
}

#[test]
fn every_boundary_line_cites_its_source() {
    let mut texts = vec![corrected_text()];
    texts.push(source_text(ComplexName::CD1, Encoding::Formulas).unwrap());
    texts.push(source_text(ComplexName::CD2, Encoding::Formulas).unwrap());
    texts.push(source_text(ComplexName::CD3, Encoding::Formulas).unwrap());
    texts.push(source_text(ComplexName::CD3, Encoding::Matrices).unwrap());
    for t in texts {
        for line in t.lines().filter(|l| l.starts_with("boundary")) {
            let (_, comment) = line.split_once('#').unwrap_or(("", ""));
            assert!(!comment.trim().is_empty(), "{line}");
        }
    }
}

#[test]
fn ill_typed_formula_terms_are_recorded() {
    let t = source_text(ComplexName::CD3, Encoding::Formulas).unwrap();
    let noted: Vec<&str> = t
        .lines()
        .filter(|l| l.contains("ill-typed printed term"))
        .collect();
    assert_eq!(noted.len(), 2);
    assert!(noted[0].starts_with("boundary bar_V_2 ") && noted[0].contains("Ups_1"));
    assert!(noted[1].starts_with("boundary bar_C_35 ") && noted[1].contains("k_2_m"));
}

#[test]
fn multiplicity_filtration_of_cd3() {
    let x = cd3();
    assert!(monotonicity_violations(&x, multiplicity_key)
        .unwrap()
        .is_empty());
    assert_eq!(multiplicity_key(x.cell("d").unwrap()).unwrap(), 0);
    assert_eq!(multiplicity_key(x.cell("A_11").unwrap()).unwrap(), 2);

    let f = Filtration::by_multiplicity(x.clone()).unwrap();
    assert_eq!(f.levels(), [0, 1, 2]);
    assert_eq!(
        f.stage(0).betti().unwrap().betti_numbers(),
        [1, 1, 0, 0, 0, 0, 0]
    );
    let rel = x
        .relative_betti(|c| multiplicity_key(c).unwrap() <= 1)
        .unwrap();
    assert_eq!(rel, [0, 0, 2, 2, 0, 0, 0]);

    let page = e1_page(&f).unwrap();
    assert_eq!(
        page.nonzero(),
        [((0, 0), 1), ((0, 1), 1), ((2, 0), 2), ((2, 1), 2)]
    );
    assert_eq!(page.euler(), x.euler());
}

#[test]
fn multiplicity_filtration_of_cd2() {
    let x = cd2();
    assert!(monotonicity_violations(&x, multiplicity_key)
        .unwrap()
        .is_empty());
    let low = x
        .cells(2)
        .iter()
        .find(|c| c.class_tag.as_deref() == Some("tripod"))
        .unwrap();
    assert_eq!(multiplicity_key(low).unwrap(), 0);
    let f = Filtration::by_multiplicity(x.clone()).unwrap();
    let page = e1_page(&f).unwrap();
    let sub = f.stage(0).betti().unwrap().betti_numbers();
    let quo = x
        .relative_betti(|c| multiplicity_key(c).unwrap() == 0)
        .unwrap();
    assert_eq!(page.column(0, 4), sub);
    assert_eq!(page.column(1, 4), quo);
    assert_eq!(sub, [1, 1, 0, 0, 0]);
    assert_eq!(quo, [0, 1, 2, 1, 0]);
    assert_eq!(page.euler(), x.euler());
}

#[test]
fn second_type_cells_form_subcomplexes() {
    assert!(type_subcomplex_check(&cd3()));
    assert!(type_subcomplex_check(&cd2()));
    assert!(type_subcomplex_check(&cd1()));
    let sub = cd3()
        .subcomplex(|c| c.type_tag == CellType::Second)
        .unwrap();
    assert_eq!(sub.total_cells(), 130);
    let f = Filtration::by_type(cd3()).unwrap();
    assert_eq!(e1_page(&f).unwrap().euler(), 0);
}
