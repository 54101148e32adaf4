use eqcol::lp::{self, exact, row_range, DualSimplex, LpInstance, LpOptions, LpStatus};
use eqcol_core::cuts::{block_cut, clique_cut, s_color_cut};
use eqcol_core::formulation::build_model;
use eqcol_core::{Graph, Vars};
use proptest::prelude::*;

fn graph(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 1..=n {
        for v in u + 1..=n {
            if mask >> (bit % 64) & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

fn check_certificates(inst: &LpInstance, s: &lp::LpSolution) -> Result<(), TestCaseError> {
    for (j, &x) in s.values.iter().enumerate() {
        prop_assert!(x >= inst.lower[j] - 1e-7 && x <= inst.upper[j] + 1e-7);
    }
    for (i, r) in inst.rows.iter().enumerate() {
        let act = r.lhs_at(&s.values);
        let (lo, hi) = row_range(r);
        prop_assert!(act >= lo - 1e-7 && act <= hi + 1e-7, "row {i} activity {act} outside [{lo},{hi}]");
        let y = s.duals[i];
        if act > lo + 1e-6 {
            prop_assert!(y <= 1e-6, "row {i}: dual {y} pushes a row off its lower bound");
        }
        if act < hi - 1e-6 {
            prop_assert!(y >= -1e-6, "row {i}: dual {y} pushes a row off its upper bound");
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn float_matches_exact(n in 4usize..=6, mask in any::<u64>(), strengthen in any::<bool>(), fix in proptest::collection::vec((0usize..36, any::<bool>()), 0..4)) {
        let g = graph(n, mask);
        let model = build_model(&g, strengthen);
        let mut inst = LpInstance::from_model(&model);
        let vars = Vars::new(n);
        for (k, one) in fix {
            let v = vars.x(1 + k % n, 1 + (k / n) % n).0;
            if inst.upper[v] > 0.0 {
                let b = if one { 1.0 } else { 0.0 };
                inst.lower[v] = b;
                inst.upper[v] = b;
            }
        }
        for v in 1..=n {
            for j in 1..=n.saturating_sub(2) {
                inst.push_row(block_cut(v, j, n).unwrap());
            }
        }
        if let Some((u, w)) = g.edges().next() {
            let q = g.grow_maximal_clique(&vec![1.0; n], u.min(w));
            inst.push_row(clique_cut(&g, &q, 1).unwrap());
        }
        inst.push_row(s_color_cut(&[1, n], n).unwrap());
        let f = lp::solve(&inst);
        let e = exact::solve(&inst);
        prop_assert_eq!(f.status, e.status);
        if f.status == LpStatus::Optimal {
            let ev = e.to_float().objective_value;
            prop_assert!((f.objective_value - ev).abs() <= 1e-6, "float {} exact {}", f.objective_value, ev);
            check_certificates(&inst, &f)?;
        }
    }

    #[test]
    fn perturbed_costs_end_on_the_true_optimum(n in 4usize..=7, mask in any::<u64>(), scale in 1e-6f64..1e-2) {
        let g = graph(n, mask);
        let mut inst = LpInstance::from_model(&build_model(&g, true));
        for v in 1..=n {
            for j in 2..=n.saturating_sub(2) {
                inst.push_row(block_cut(v, j, n).unwrap());
            }
        }
        let e = exact::solve(&inst).to_float().objective_value;
        let f = lp::solve_with(&inst, LpOptions { perturbation: scale, ..LpOptions::default() });
        prop_assert_eq!(f.status, LpStatus::Optimal);
        prop_assert!((f.objective_value - e).abs() <= 1e-6, "float {} exact {}", f.objective_value, e);
        check_certificates(&inst, &f)?;
    }

    #[test]
    fn dual_bound_never_exceeds_the_optimum(n in 4usize..=7, mask in any::<u64>(), pivots in 0usize..60) {
        let g = graph(n, mask);
        let inst = LpInstance::from_model(&build_model(&g, false));
        let e = exact::solve(&inst).to_float().objective_value;
        let mut lp = DualSimplex::new(
            inst.objective.clone(),
            inst.lower.clone(),
            inst.upper.clone(),
            LpOptions { max_pivots: pivots, perturbation: 1e-3, ..LpOptions::default() },
        );
        for r in &inst.rows {
            let (lo, hi) = row_range(r);
            lp.add_row(&lp::float_terms(r), lo, hi);
        }
        lp.solve();
        prop_assert!(lp.dual_bound() <= e + 1e-7, "bound {} optimum {}", lp.dual_bound(), e);
    }

    #[test]
    fn warm_and_cold_agree(n in 5usize..=9, mask in any::<u64>()) {
        let g = graph(n, mask);
        let model = build_model(&g, true);
        let mut inst = LpInstance::from_model(&model);
        let first = lp::solve(&inst);
        prop_assert_eq!(first.status, LpStatus::Optimal);
        let cuts: Vec<_> = (1..=n).flat_map(|v| (2..=n - 2).map(move |j| block_cut(v, j, n).unwrap())).collect();
        let warm = lp::resolve_with_rows(&mut inst, &cuts, &first);
        let cold = lp::solve(&inst);
        prop_assert_eq!(warm.status, cold.status);
        prop_assert!((warm.objective_value - cold.objective_value).abs() < 1e-7);
        prop_assert!(warm.objective_value >= first.objective_value - 1e-9);
        check_certificates(&inst, &warm)?;
    }
}

#[test]
fn c5_relaxation_is_a_lower_bound() {
    let g = Graph::cycle(5);
    let s = lp::solve(&LpInstance::from_model(&build_model(&g, false)));
    assert_eq!(s.status, LpStatus::Optimal);
    assert!(s.objective_value <= 3.0 + 1e-9);
}

#[test]
fn forcing_color_one_empty_is_infeasible() {
    let g = Graph::cycle(5);
    let mut inst = LpInstance::from_model(&build_model(&g, false));
    let first = lp::solve(&inst);
    let vars = Vars::new(5);
    let row = eqcol_core::CutRow::new(
        (1..=5).map(|v| (vars.x(v, 1), 1)),
        eqcol_core::Sense::Le,
        0,
        eqcol_core::Family::Custom { name: "empty-color".into() },
    );
    let s = lp::resolve_with_rows(&mut inst, &[row], &first);
    assert!(s.status == LpStatus::Infeasible || s.objective_value > first.objective_value);
}
