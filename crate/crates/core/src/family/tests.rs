use super::*;
use crate::arith::kronecker;
use crate::dims::generating_weights;

fn odd_primes(below: u64) -> Vec<u64> {
    (3..below).filter(|&p| arith::is_prime(p)).collect()
}

#[test]
fn sum_examples() {
    assert_eq!(sum_sq_fracs(5, 1).unwrap(), rat(2, 1));
    assert_eq!(sum_sq_fracs(3, 2).unwrap(), rat(8, 3));
    assert_eq!(sum_sq_fracs(7, 1).unwrap(), rat(2, 1));
    assert_eq!(sum_odd_fracs(5, 1).unwrap(), rat(5, 4));
    for (p, r) in [(7, 1), (11, 2), (3, 2)] {
        assert_eq!(sum_odd_fracs(p, r).unwrap(), sum_odd_fracs_brute(p, r).unwrap());
    }
}

#[test]
fn trace_examples() {
    assert_eq!(tr_l_closed(5, 1).unwrap(), rat(23, 4));
    assert_eq!(tr_l_closed(7, 1).unwrap(), rat(31, 4));
    assert_eq!(tr_l_closed(11, 1).unwrap(), rat(51, 4));
    assert_eq!(tr_l_brute(5, 1).unwrap(), rat(115, 20));
}

#[test]
fn closed_forms_match_brute_force() {
    for p in odd_primes(60) {
        for r in 1..=3u32 {
            if p.pow(r) > 200_000 {
                continue;
            }
            let (sq, odd, tr) = (
                sum_sq_fracs(p, r).unwrap(),
                sum_odd_fracs(p, r).unwrap(),
                tr_l_closed(p, r).unwrap(),
            );
            assert_eq!(sq, sum_sq_fracs_brute(p, r).unwrap(), "({p},{r})");
            assert_eq!(odd, sum_odd_fracs_brute(p, r).unwrap(), "({p},{r})");
            assert_eq!(tr, tr_l_brute(p, r).unwrap(), "({p},{r})");
            assert_eq!(tr, tr_l_unsplit(p, r).unwrap(), "({p},{r})");
            let pr = p.pow(r);
            let low = p.pow(r / 2);
            assert_eq!(tr, big(2 * pr) - big(low) - sq - odd, "({p},{r})");
        }
    }
}

#[test]
fn floor_of_r_not_p() {
    // the {p^r/4} correction carries p^{⌊r/2⌋}; with p^{⌊p/2⌋} brute force disagrees
    for (p, r) in [(5u64, 2u32), (7, 2)] {
        let f = FamilyParams::new(p, r).unwrap();
        let quarter = rat((f.pr() % 4) as i64, 4);
        let swapped = tr_l_closed(p, r).unwrap() + &quarter * big(p.pow(r / 2)) - quarter * big(p.pow((p / 2) as u32));
        assert_ne!(swapped, tr_l_brute(p, r).unwrap());
    }
}

#[test]
fn class_number_cases() {
    for p in odd_primes(500) {
        assert_eq!(h_star(p).unwrap(), h_star_cases(p).unwrap(), "h*_{p}");
        assert_eq!(h_prime(p).unwrap(), h_prime_cases(p).unwrap(), "h'_{p}");
    }
}

#[test]
fn quarter_interval_residues() {
    for p in odd_primes(500).into_iter().filter(|p| p % 4 == 1) {
        let s: i64 = (1..=(p as i64 - 1) / 4).map(|a| kronecker(a, p as i64) as i64).sum();
        assert_eq!(2 * s, class_number(p).unwrap().h as i64, "p = {p}");
    }
}

#[test]
fn table_constants() {
    for p in odd_primes(100).into_iter().filter(|&p| p >= 5) {
        for r in 1..=3 {
            let c = TableConstants::new(p, r).unwrap();
            assert!(c.delta == rat(1, 8) || c.delta == rat(3, 8));
            assert!((&c.eps_plus * &c.eps_minus).is_zero());
            assert_eq!(&c.eps_plus + &c.eps_minus, rat(1, 3));
        }
    }
}

#[test]
fn table_examples() {
    let w = table_multiplicities(5, 1).unwrap();
    assert_eq!(w.half_integral(), vec![0, 0, 0, 1, 1, 2, 1, 2, 1, 1, 1, 0]);
    assert_eq!(w.weighted_sum(), arith::rat_int(69));
    for p in [3u64, 2] {
        assert!(table_multiplicities(p, 1).is_err());
    }
    assert!(tr_l_closed(3, 1).is_ok());
}

#[test]
fn table_agrees_with_euler_pipeline() {
    for p in [5u64, 7, 11, 13] {
        for r in [1u32, 2] {
            let table = table_multiplicities(p, r).unwrap();
            let euler = generating_weights(&FiniteQuadraticModule::a2pr(p, r).unwrap()).unwrap();
            assert_eq!(table, euler, "({p},{r})");
        }
    }
}

#[test]
fn table_holds_across_primes() {
    for p in odd_primes(2000).into_iter().filter(|&p| p >= 5) {
        for r in [1u32, 2] {
            let w = table_multiplicities(p, r).unwrap();
            assert_eq!(w.total(), 2 * p.pow(r));
            let hi = w.half_integral();
            assert_eq!((hi[0], hi[11]), (0, 0));
        }
    }
}

#[test]
fn limit_examples() {
    let l = limit_distribution();
    assert_eq!(l[5], rat(8, 48));
    assert_eq!(l[11], rat(0, 1));
    assert_eq!(l.iter().fold(Rational::zero(), |a, b| a + b), rat(1, 1));
}

#[test]
fn distribution_examples() {
    let rows = distribution_scan(&[1151, 5, 101281], 1).unwrap();
    assert_eq!(rows.iter().map(|r| r.p).collect::<Vec<_>>(), vec![1151, 5, 101281]);
    assert_eq!(rows[0].class_number, 41);
    assert_eq!(rows[2].class_number, 168);
    // largest gap at 21/2: 1/10 − 1/48
    assert_eq!(rows[1].deviation, rat(19, 240));
    assert!(rows[2].deviation < rat(5, 1000));
    assert!(rows[2].deviation < rows[0].deviation);
}

#[test]
fn distribution_along_powers() {
    let rows = distribution_scan_powers(5, &[1, 3, 6, 9]).unwrap();
    assert_eq!(rows.iter().map(|r| r.r).collect::<Vec<_>>(), vec![1, 3, 6, 9]);
    assert!(rows[3].deviation < rows[0].deviation);
    assert!(rows[3].deviation < rat(1, 100));
}
