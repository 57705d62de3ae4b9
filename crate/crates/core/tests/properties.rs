use proptest::prelude::*;
use wittcoh::cochain::{Cochain, ModuleCochain};
use wittcoh::envelope::{multiply, normal_order, Operator, PBWMonomial};
use wittcoh::exactnum::{kernel_basis, rank, rat, LaurentPoly, Rational, SparseMatrix};
use wittcoh::liealg::{bracket, AlgebraKind};
use wittcoh::massey::{gauge_transform, mc_residual, product_set, rational_roots, FormalConnection, MasseyInput};
use wittcoh::threadmod::ThreadSpec;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn form(max_deg: usize) -> impl Strategy<Value = Cochain> {
    prop::collection::vec((prop::collection::vec(1u32..=8, 1..=max_deg), small_rat()), 0..4).prop_map(|terms| {
        terms.into_iter().fold(Cochain::zero(), |acc, (idx, c)| acc.add(&Cochain::monomial(idx, c)))
    })
}

fn homogeneous(deg: usize) -> impl Strategy<Value = Cochain> {
    prop::collection::vec((prop::collection::btree_set(1u32..=8, deg..=deg), small_rat()), 0..4).prop_map(|terms| {
        terms.into_iter().fold(Cochain::zero(), |acc, (idx, c)| acc.add(&Cochain::monomial(idx.into_iter().collect(), c)))
    })
}

fn spec() -> impl Strategy<Value = ThreadSpec> {
    let kind = prop_oneof![
        small_rat().prop_map(ThreadSpec::a),
        (small_rat(), small_rat()).prop_map(|(l, m)| ThreadSpec::f(l, m)),
        Just(ThreadSpec::mtilde()),
        Just(ThreadSpec::mtilde_nonzero()),
    ];
    (kind, -5i32..=0, 2i32..=7).prop_map(|(k, m, len)| k.bounded(m, m + len))
}

fn word() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(1i32..=4, 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squares_to_zero(f in form(3)) {
        prop_assert!(f.d().d().is_zero());
    }

    #[test]
    fn leibniz(a in homogeneous(1), b in homogeneous(2)) {
        let lhs = a.wedge(&b).d();
        let rhs = a.d().wedge(&b).sub(&a.bar().wedge(&b.d()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bar_laws(a in form(3), b in form(3)) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!(a.wedge(&b).bar(), a.bar().wedge(&b.bar()).neg());
        prop_assert_eq!(a.d().bar(), a.bar().d().neg());
    }

    #[test]
    fn weight_is_preserved(f in homogeneous(2)) {
        let d = f.d();
        for w in d.weights() {
            prop_assert!(f.weights().contains(&w));
        }
    }

    #[test]
    fn jacobi_in_witt_window(x in -6i32..=6, y in -6i32..=6, z in -6i32..=6) {
        for kind in [AlgebraKind::WittWindow { lo: -20, hi: 20 }, AlgebraKind::VirasoroWindow { lo: -20, hi: 20 }] {
            let cyc = |a: i32, b: i32, c: i32| -> Vec<(i32, Rational)> {
                let mut out = Vec::new();
                for (k, v) in bracket(&kind, b, c).unwrap().terms {
                    for (kk, vv) in bracket(&kind, a, k).unwrap().terms {
                        out.push((kk, &v * &vv));
                    }
                    if let Some(zz) = bracket(&kind, a, k).unwrap().central {
                        out.push((i32::MIN, &v * &zz));
                    }
                }
                out
            };
            let mut sum = std::collections::BTreeMap::<i32, Rational>::new();
            for (k, v) in cyc(x, y, z).into_iter().chain(cyc(y, z, x)).chain(cyc(z, x, y)) {
                *sum.entry(k).or_insert_with(|| rat(0, 1)) += v;
            }
            prop_assert!(sum.values().all(|v| *v == rat(0, 1)));
        }
    }

    #[test]
    fn module_differential_squares_to_zero(s in spec(), forms in prop::collection::vec((homogeneous(1), 0i32..=7), 1..3)) {
        let (m, n) = s.bounds.unwrap();
        let mut x = ModuleCochain::zero();
        for (f, j) in forms {
            x = x.add(&ModuleCochain::tensor(&f, m + j.min(n - m)));
        }
        prop_assert!(x.differential(&s).differential(&s).is_zero());
    }

    #[test]
    fn representation_law(s in spec(), a in 1u32..=4, b in 1u32..=4) {
        let (m, n) = s.bounds.unwrap();
        for j in m..=n {
            let lhs = s.act(a, j + b as i32) * s.act(b, j) - s.act(b, j + a as i32) * s.act(a, j);
            let rhs = rat(b as i64 - a as i64, 1) * s.act(a + b, j);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pbw_product_is_associative(u in word(), v in word(), w in word()) {
        let (a, b, c) = (normal_order(&u), normal_order(&v), normal_order(&w));
        prop_assert_eq!(multiply(&multiply(&a, &b), &c), multiply(&a, &multiply(&b, &c)));
    }

    #[test]
    fn pbw_commutator_matches_bracket(i in 1i32..=5, j in 1i32..=5) {
        let (ei, ej) = (Operator::term(PBWMonomial::new(vec![i]), rat(1, 1)), Operator::term(PBWMonomial::new(vec![j]), rat(1, 1)));
        let comm = multiply(&ei, &ej).sub(&multiply(&ej, &ei));
        let expect = Operator::term(PBWMonomial::new(vec![i + j]), rat((j - i) as i64, 1));
        prop_assert_eq!(comm, if i == j { Operator::zero() } else { expect });
    }

    #[test]
    fn laurent_eval_is_a_ring_map(a in prop::collection::vec((-3i32..=3, small_rat()), 0..4),
                                  b in prop::collection::vec((-3i32..=3, small_rat()), 0..4),
                                  t in small_rat()) {
        prop_assume!(t != rat(0, 1));
        let build = |v: &[(i32, Rational)]| v.iter().fold(LaurentPoly::zero(), |mut p, (e, c)| { p.add_term(*e, c); p });
        let (p, q) = (build(&a), build(&b));
        prop_assert_eq!((&p * &q).eval(&t), p.eval(&t) * q.eval(&t));
        prop_assert_eq!((&p + &q).eval(&t), p.eval(&t) + q.eval(&t));
    }

    #[test]
    fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..5)) {
        let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|x| rat(*x, 1)).collect()).collect();
        let m = SparseMatrix::from_dense(&dense);
        let ker = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + ker.len(), 4);
        for v in ker {
            prop_assert!(m.mul_vec(&v).iter().all(|x| *x == rat(0, 1)));
        }
    }

    #[test]
    fn roots_of_products_of_linear_factors(r in prop::collection::btree_set((-5i64..=5, 1i64..=4), 1..4)) {
        let roots: std::collections::BTreeSet<Rational> = r.iter().map(|(n, d)| rat(*n, *d)).collect();
        let mut coeffs = vec![rat(1, 1)];
        for x in &roots {
            let mut next = vec![rat(0, 1); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k] -= c * x;
                next[k + 1] += c.clone();
            }
            coeffs = next;
        }
        prop_assert_eq!(rational_roots(&coeffs), roots.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn unipotent_gauge_keeps_the_corner(entries in prop::collection::vec(small_rat(), 6)) {
        let v = product_set(&[MasseyInput::e(1), MasseyInput::e(2), MasseyInput::e(2)]);
        let a: FormalConnection<Rational> = v.certificate.unwrap();
        let mut c = vec![vec![rat(0, 1); 4]; 4];
        let mut it = entries.into_iter();
        for r in 0..4 {
            c[r][r] = rat(1, 1);
            for col in 0..r {
                c[r][col] = it.next().unwrap();
            }
        }
        prop_assert_eq!(mc_residual(&gauge_transform(&a, &c).unwrap()).unwrap(), mc_residual(&a).unwrap());
    }
}
