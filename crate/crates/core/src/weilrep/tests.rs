use super::*;
use crate::arith::rat;
use crate::quadmod::parse_module;

fn m(s: &str) -> FiniteQuadraticModule {
    parse_module(s).unwrap()
}

fn small_corpus() -> Vec<FiniteQuadraticModule> {
    [
        "0", "Am(2)", "Am(4)", "Am(6)", "Am(10)", "A(3,1)", "A(5,1)", "A(7,1)", "A(2,1)+A(7,1)",
        "A(4,3)", "A(9,2)", "B(2)", "C(2)", "C(2)^-1+A(3,1)", "A(5,1)+A(5,2)",
    ]
    .iter()
    .map(|s| m(s))
    .collect()
}

#[test]
fn am2_matrices() {
    let rep = WeilRep::build(&m("Am(2)")).unwrap();
    let n = rep.order();
    let t = rep.rho_t();
    assert!(t.get(0, 0).is_one());
    assert_eq!(*t.get(1, 1), Cyclotomic::root_of_unity(4, -1));
    let c = (&Cyclotomic::root_of_unity(8, 1) * &crate::cyclotomic::sqrt_integer(2)).scalar_mul(&rat(1, 2));
    let expected = Matrix::from_fn(2, n, |r, col| if r == 1 && col == 1 { -&c } else { c.clone() });
    assert_eq!(*rep.rho_s(), expected);
}

#[test]
fn trivial_matrices() {
    let rep = WeilRep::build(&m("0")).unwrap();
    assert!(rep.rho_t().is_identity());
    assert!(rep.rho_s().is_identity());
}

#[test]
fn group_relations_and_unitarity() {
    for d in small_corpus() {
        let rep = WeilRep::build(&d).unwrap();
        let s = rep.rho_s();
        let z = rep.rho_z();
        assert!(z.pow(4).is_identity(), "{d}");
        assert_eq!(rep.element("STSTST").unwrap(), z, "{d}");
        assert!(s.mul(&s.conj_transpose()).is_identity(), "{d}");
        let zs = Cyclotomic::root_of_unity(4, rep.signature() as i64);
        assert_eq!(z, rep.z0().scale(&zs), "{d}");
        let sign = if rep.signature() % 2 == 0 { 1 } else { -1 };
        assert_eq!(z.pow(2), Matrix::identity(rep.dim(), rep.order()).scale(&Cyclotomic::from_integer(1, sign)));
    }
}

#[test]
fn words() {
    let rep = WeilRep::build(&m("Am(10)")).unwrap();
    assert_eq!(rep.element("SS").unwrap(), rep.rho_z());
    assert_eq!(rep.element("ST").unwrap(), rep.rho_s().mul(&rep.rho_t()));
    assert!(rep.element("SSSSSSSS").unwrap().is_identity());
    assert!(rep.element("S T T^-1 S⁻¹").unwrap().is_identity());
    assert!(matches!(rep.element("SXT"), Err(Error::Parse { pos: 1, .. })));
}

#[test]
fn build_respects_bound() {
    assert!(matches!(WeilRep::build(&m("Am(202)")), Err(Error::Resource(_))));
}

#[test]
fn gauss_sum_traces_match_matrices() {
    for d in small_corpus().into_iter().filter(|d| d.size() <= 30) {
        let rep = WeilRep::build(&d).unwrap();
        let s = rep.rho_s().clone();
        let r = rep.element("ST").unwrap();
        let mut sp = Matrix::identity(rep.dim(), rep.order());
        for j in 0..8 {
            assert_eq!(sp.trace(), trace_s_power(&d, j).unwrap(), "{d} S^{j}");
            sp = sp.mul(&s);
        }
        let mut rp = Matrix::identity(rep.dim(), rep.order());
        for j in 0..12 {
            assert_eq!(rp.trace(), trace_r_power(&d, j).unwrap(), "{d} R^{j}");
            rp = rp.mul(&r);
        }
        assert_eq!(rep.rho_z().trace(), trace_z(&d).unwrap());
        assert_eq!(rep.rho_z().pow(3).trace(), trace_z_power(&d, -1).unwrap());
    }
}

#[test]
fn family_trace_facts() {
    for p in [5u64, 7, 11] {
        for r in [1u32, 2] {
            let d = FiniteQuadraticModule::a2pr(p, r).unwrap();
            assert!(trace_s_power(&d, 1).unwrap().is_zero());
            let pr = p.pow(r) as i64;
            let expected = arith::kronecker(pr, 3) as i64;
            assert_eq!(trace_r_power(&d, 2).unwrap(), Cyclotomic::from_integer(1, expected));
        }
    }
    assert_eq!(trace_z(&m("A(7,1)")).unwrap(), Cyclotomic::from_integer(1, -1));
}

#[test]
fn exponent_examples() {
    let d = m("Am(10)");
    let l = exponents(&d, ExponentChoice::Standard);
    assert_eq!(l.trace(), rat(23, 4));
    assert_eq!(trace_exponents(&d, ExponentChoice::Standard), rat(23, 4));
    assert_eq!(l.trace_on_two_torsion(&d), rat(3, 4));
    assert_eq!(trace_exponents_two_torsion(&d, ExponentChoice::Standard), rat(3, 4));
    let t = m("0");
    assert_eq!(exponents(&t, ExponentChoice::Standard).trace(), rat(0, 1));
    assert_eq!(exponents(&t, ExponentChoice::Cuspidal).trace(), rat(1, 1));
}

#[test]
fn exponents_are_compatible_with_t() {
    for d in small_corpus() {
        let rep = WeilRep::build(&d).unwrap();
        let t = rep.rho_t();
        for choice in [ExponentChoice::Standard, ExponentChoice::Cuspidal] {
            let l = exponents(&d, choice);
            for (x, lx) in l.diagonal().iter().enumerate() {
                match choice {
                    ExponentChoice::Standard => assert!(*lx >= rat(0, 1) && *lx < rat(1, 1)),
                    ExponentChoice::Cuspidal => assert!(*lx > rat(0, 1) && *lx <= rat(1, 1)),
                }
                let n = lx.denom().try_into().unwrap();
                let k: i64 = lx.numer().try_into().unwrap();
                assert_eq!(Cyclotomic::root_of_unity(n, k), *t.get(x, x));
            }
            assert_eq!(l.trace(), trace_exponents(&d, choice));
        }
    }
}

#[test]
fn eigenspace_traces() {
    for d in small_corpus() {
        let rep = WeilRep::build(&d).unwrap();
        for choice in [ExponentChoice::Standard, ExponentChoice::Cuspidal] {
            let l = exponents(&d, choice);
            let mut total = rat(0, 1);
            for j in 0..4 {
                let closed = tr_l_eigenspace(&d, &l, j).unwrap();
                assert_eq!(closed, rep.tr_l_eigenspace_matrix(&l, j).unwrap(), "{d} j={j}");
                total += closed;
            }
            assert_eq!(total, l.trace());
        }
    }
    let d = m("Am(10)");
    let l = exponents(&d, ExponentChoice::Standard);
    // sig = 1: only the ±i eigenspaces are nonzero
    assert_eq!(tr_l_eigenspace(&d, &l, 0).unwrap(), rat(0, 1));
    assert_eq!(tr_l_eigenspace(&d, &l, 2).unwrap(), rat(0, 1));
    let t = m("0");
    assert_eq!(tr_l_eigenspace(&t, &exponents(&t, ExponentChoice::Standard), 0).unwrap(), rat(0, 1));
    let mut diag = l.diagonal().to_vec();
    diag[1] = rat(1, 3);
    let bad = ExponentMatrix::from_diagonal(diag, ExponentChoice::Standard);
    assert!(matches!(tr_l_eigenspace(&d, &bad, 0), Err(Error::InvalidParameter(_))));
}

#[test]
fn image_groups() {
    let t = WeilRep::build(&m("0")).unwrap();
    assert_eq!(image_group(&t, 10).unwrap().order(), 1);
    for s in ["Am(2)", "A(5,1)"] {
        let rep = WeilRep::build(&m(s)).unwrap();
        let g = image_group(&rep, DEFAULT_IMAGE_ORDER_CAP).unwrap();
        for a in g.elements().iter().step_by(7) {
            for b in g.elements().iter().step_by(11) {
                assert!(g.contains(&a.mul(b)), "{s}");
            }
            assert!(g.contains(&a.conj_transpose()), "{s}");
        }
        assert!(g.contains(&rep.rho_s().conj_transpose()));
        assert!(g.contains(&rep.element("T^-1").unwrap()));
        // order is independent of the exploration order
        let mut h = vec![Matrix::identity(rep.dim(), rep.order())];
        let mut seen: std::collections::HashSet<Vec<u8>> = h.iter().map(Matrix::canonical_key).collect();
        let mut i = 0;
        while i < h.len() {
            let g0 = h[i].clone();
            i += 1;
            for next in [rep.rho_t().mul(&g0), rep.rho_s().mul(&g0)] {
                if seen.insert(next.canonical_key()) {
                    h.push(next);
                }
            }
        }
        assert_eq!(h.len(), g.order(), "{s}");
    }
    let rep = WeilRep::build(&m("A(5,1)")).unwrap();
    assert!(matches!(image_group(&rep, 10), Err(Error::Resource(_))));
}

#[test]
fn invariants_examples() {
    assert_eq!(invariants_dim(&m("0"), &[]).unwrap(), 1);
    assert_eq!(invariants_dim(&m("Am(10)"), &[]).unwrap(), 0);
    assert_eq!(invariants_dim(&m("A(7,1)"), &[]).unwrap(), 0);
}

#[test]
fn invariants_routes_agree() {
    for s in ["0", "Am(2)", "A(5,1)", "A(7,1)", "C(2)", "A(3,1)+A(3,1)^-1"] {
        let d = m(s);
        let rep = WeilRep::build(&d).unwrap();
        let g = image_group(&rep, DEFAULT_IMAGE_ORDER_CAP).unwrap();
        let neg = vec![negation(&d)];
        for perms in [vec![], neg] {
            let a = invariants_dim_by_averaging(&rep, &g, &perms).unwrap();
            let b = invariants_dim(&d, &perms).unwrap();
            assert_eq!(a, b, "{s}");
        }
    }
}

#[test]
fn invariants_of_hyperbolic_planes() {
    // ℂ[D ⊕ D⁻¹] ≅ End(ℂ[D]) and the invariants are the commutant of ρ_D
    let d = m("A(3,1)");
    let dd = d.direct_sum(&d.negated());
    assert!(invariants_dim(&dd, &[]).unwrap() >= 1);
    // the two self-dual isotropic lines of C(2) give independent invariants
    assert_eq!(invariants_dim(&m("C(2)"), &[]).unwrap(), 2);
}

#[test]
fn invariants_are_basis_independent() {
    let a = m("A(3,1)+A(3,1)^-1+A(2,1)");
    let b = m("A(2,1)+A(3,1)^-1+A(3,1)");
    assert_eq!(invariants_dim(&a, &[]).unwrap(), invariants_dim(&b, &[]).unwrap());
}

#[test]
fn constraints_must_preserve_q() {
    let d = m("A(5,1)");
    let shift: Vec<u64> = (0..5).map(|x| (x + 1) % 5).collect();
    assert!(matches!(invariants_dim(&d, &[shift]), Err(Error::InvalidParameter(_))));
}
