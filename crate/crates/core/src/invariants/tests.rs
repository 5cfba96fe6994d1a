use super::*;
use crate::action::{build_arena, g_derivation, polarization, CopySpec, Side};
use crate::algebras::{basis_of, q_complement_f};
use crate::solver::is_annihilated;
use crate::supermatrix::Format;
use num_traits::Signed;
use std::sync::Arc;

fn arena(n: usize, m: usize, c: [usize; 4]) -> Arc<Arena> {
    build_arena(n, m, CopySpec::new(c[0], c[1], c[2], c[3])).unwrap()
}

fn spec(f: Family, n: usize, m: usize) -> FamilySpec {
    FamilySpec::new(f, n, m).unwrap()
}

fn ds(a: &Arena, f: Family) -> Vec<Derivation> {
    let (n, m) = a.dim_v();
    family_derivations(a, &spec(f, n, m)).unwrap()
}

fn part(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

fn gl_unit(n: usize, m: usize, i: usize, j: usize) -> SuperMatrix {
    SuperMatrix::unit(&Format::standard(n, m), &crate::algebras::constants(), i, j)
}

#[test]
fn fixtures_parse_and_version_is_stable() {
    let c = conventions();
    assert_eq!(c.version, 1);
    let v = fixtures_version();
    assert!(v.starts_with("v1-"));
    assert_eq!(v, fixtures_version());
    assert_eq!(v.len(), "v1-".len() + 12);
}

#[test]
fn q_bracket_fixture_matches_solver() {
    for n in [1, 2] {
        assert_eq!(
            solve_q_bracket(n).unwrap(),
            conventions().q_bracket,
            "n={n}"
        );
    }
}

#[test]
fn form_sign_fixture_is_the_invariant_rule() {
    let cases = [
        (Family::Osp, 1, 2, [0, 0, 1, 2]),
        (Family::Osp, 2, 2, [0, 0, 2, 1]),
        (Family::Pe, 1, 1, [0, 0, 1, 1]),
        (Family::Pe, 2, 2, [0, 0, 2, 2]),
    ];
    let mut winners = Vec::new();
    for sign in FormSign::ALL {
        let all = cases.iter().all(|&(f, n, m, c)| {
            let a = arena(n, m, c);
            let d = ds(&a, f);
            let ns = a.s_index().len();
            (0..ns).all(|s| {
                (s..ns).all(|t| {
                    is_annihilated(
                        &d,
                        &form_inner_with(&a, &spec(f, n, m), s, t, sign).unwrap(),
                    )
                })
            })
        });
        if all {
            winners.push(sign);
        }
    }
    assert_eq!(winners, vec![conventions().form_sign]);
}

#[test]
fn y_realization_fixture_is_the_sq_invariant_one() {
    let a = arena(2, 2, [2, 0, 2, 0]);
    let sq = ds(&a, Family::Sq);
    let invariant = |r| {
        let y = qet_y_with(&a, r).unwrap();
        sq.iter().all(|d| {
            y.apply_derivation(d.parity(), |f| Ok(d.apply(f)))
                .unwrap()
                .is_zero()
        })
    };
    assert!(!invariant(YRealization::Plain));
    assert!(invariant(YRealization::Twisted));
    assert_eq!(conventions().y_realization, YRealization::Twisted);
}

#[test]
fn f_of_qet_y_is_one() {
    for n in [1, 2] {
        let a = arena(n, n, [n, 0, n, 0]);
        let f = g_derivation(&a, &q_complement_f(n)).unwrap();
        let fy = qet_y(&a)
            .unwrap()
            .apply_derivation(Parity::Odd, |g| Ok(f.apply(g)))
            .unwrap();
        assert_eq!(
            fy.into_polynomial().unwrap(),
            Polynomial::one(a.table()),
            "n={n}"
        );
    }
}

#[test]
fn scalar_product_examples() {
    let a = arena(1, 0, [1, 0, 1, 0]);
    assert_eq!(scalar_product(&a, 0, 0).unwrap(), &a.x(0, 0) * &a.xs(0, 0));
    let b = arena(1, 1, [1, 1, 1, 1]);
    // t = 1̄ (odd covector copy), s = 1 (even vector copy)
    assert_eq!(
        scalar_product(&b, 1, 0).unwrap().parity(),
        Some(Parity::Odd)
    );
    let gl = ds(&b, Family::Gl);
    for t in 0..2 {
        for s in 0..2 {
            assert!(is_annihilated(&gl, &scalar_product(&b, t, s).unwrap()));
        }
    }
    assert!(matches!(scalar_product(&b, 2, 0), Err(Error::BadIndex(_))));
}

#[test]
fn q_bracket_properties() {
    let a = arena(1, 1, [1, 0, 1, 0]);
    let f = q_bracket(&a, 0, 0).unwrap();
    assert_eq!(f.parity(), Some(Parity::Odd));
    assert!(is_annihilated(&ds(&a, Family::Q), &f));
    let b = arena(2, 2, [2, 0, 2, 0]);
    let qd = ds(&b, Family::Q);
    let pol = polarization(&b, Side::U, 1, 0).unwrap();
    for s in 0..2 {
        let f = q_bracket(&b, 0, s).unwrap();
        assert!(is_annihilated(&qd, &f));
        let image = pol.apply(&f);
        let target = q_bracket(&b, 1, s).unwrap();
        assert!(image == target || image == -&target);
    }
    let c = arena(1, 1, [1, 1, 1, 0]);
    assert!(q_bracket(&c, 1, 0).is_err());
}

#[test]
fn osp_inner_product_shape() {
    let a = arena(1, 2, [0, 0, 1, 2]);
    let f = form_inner(&a, &spec(Family::Osp, 1, 2), 0, 0).unwrap();
    assert_eq!(
        f.coeff(&Monomial::from_pairs([(a.xs_id(0, 0), 2)])),
        BigRational::one()
    );
    let odd: Vec<_> = f
        .iter()
        .filter(|(m, _)| m.degree() == 2 && m.factors().len() == 2)
        .collect();
    assert_eq!(odd.len(), 1);
    assert_eq!(odd[0].1.abs(), BigRational::from_integer(2.into()));
}

#[test]
fn form_inner_invariance_and_parity() {
    for (f, n, m, c) in [
        (Family::Osp, 1, 2, [0, 0, 1, 2]),
        (Family::Pe, 1, 1, [0, 0, 1, 1]),
        (Family::Pe, 2, 2, [0, 0, 2, 1]),
    ] {
        let a = arena(n, m, c);
        let d = ds(&a, f);
        let ns = a.s_index().len();
        for s in 0..ns {
            for t in s..ns {
                let g = form_inner(&a, &spec(f, n, m), s, t).unwrap();
                assert!(is_annihilated(&d, &g));
                if f == Family::Pe && !g.is_zero() {
                    assert_eq!(
                        g.parity(),
                        Some(a.s_parity(s) + a.s_parity(t) + Parity::Odd)
                    );
                }
            }
        }
    }
    let a = arena(1, 1, [1, 0, 1, 1]);
    assert!(matches!(
        form_inner(&a, &spec(Family::Pe, 1, 1), 0, 0),
        Err(Error::WrongArena(_))
    ));
    assert!(matches!(
        form_inner(&a, &spec(Family::Gl, 1, 1), 0, 0),
        Err(Error::NoForm(_))
    ));
}

#[test]
fn block_dets() {
    let a = arena(1, 1, [1, 1, 1, 1]);
    assert_eq!(block_det(&a, BlockDet::Delta).unwrap(), a.x(0, 0));
    assert_eq!(block_det(&a, BlockDet::DeltaStar).unwrap(), a.xs(0, 0));
    assert_eq!(block_det(&a, BlockDet::Omega).unwrap(), a.x(1, 1));
    assert_eq!(block_det(&a, BlockDet::OmegaStar).unwrap(), a.xs(1, 1));
    let b = arena(2, 1, [2, 1, 2, 1]);
    for w in [
        BlockDet::Delta,
        BlockDet::DeltaStar,
        BlockDet::Omega,
        BlockDet::OmegaStar,
    ] {
        let d = block_det(&b, w).unwrap();
        assert_eq!(d.parity(), Some(Parity::Even));
    }
    let det = &(&b.xs(0, 0) * &b.xs(1, 1)) - &(&b.xs(0, 1) * &b.xs(1, 0));
    assert_eq!(block_det(&b, BlockDet::DeltaStar).unwrap(), det);
    let c = arena(2, 1, [1, 0, 1, 0]);
    assert!(matches!(
        block_det(&c, BlockDet::Delta),
        Err(Error::InsufficientCopies(_))
    ));
}

#[test]
fn pi_products() {
    let a = arena(1, 1, [1, 1, 1, 1]);
    let p10s = pi_product(&a, PiProduct::Pi10Star).unwrap();
    assert_eq!(p10s, a.xs(1, 0));
    let p10 = pi_product(&a, PiProduct::Pi10).unwrap();
    assert_eq!(p10, a.x(1, 0));
    assert!((&p10 * &p10).is_zero());
    let b = arena(1, 1, [0, 0, 1, 1]);
    let plus = pi_product(&b, PiProduct::PiPlus).unwrap();
    assert_eq!(plus, form_inner(&b, &spec(Family::Pe, 1, 1), 0, 0).unwrap());
    assert_eq!(
        pi_product(&b, PiProduct::PiMinus).unwrap(),
        Polynomial::one(b.table())
    );
}

#[test]
fn odd_diagonal_pe_products_vanish() {
    let a = arena(2, 2, [0, 0, 2, 2]);
    let pe = spec(Family::Pe, 2, 2);
    for s in a.s_of_parity(Parity::Odd) {
        assert!(form_inner(&a, &pe, s, s).unwrap().is_zero());
    }
    for s in a.s_of_parity(Parity::Even) {
        assert!(!form_inner(&a, &pe, s, s).unwrap().is_zero());
    }
    let minus = pi_product(&a, PiProduct::PiMinus).unwrap();
    assert_eq!(minus, form_inner(&a, &pe, 2, 3).unwrap());
}

#[test]
fn f_one_formula_and_invariance() {
    let a = arena(1, 1, [1, 1, 1, 1]);
    let f1 = f_invariant(&a, 1).unwrap();
    let expected = &(&a.xs(0, 0) * &a.x(1, 1)) * &scalar_product(&a, 1, 0).unwrap();
    assert_eq!(f1, expected);
    assert_eq!(f1.total_degree(), Some(4));
    let sl = ds(&a, Family::Sl);
    for k in [1, -1, 2, -2] {
        let f = f_invariant(&a, k).unwrap();
        assert!(!f.is_zero());
        assert!(is_annihilated(&sl, &f), "k={k}");
    }
    let e11 = g_derivation(&a, &gl_unit(1, 1, 0, 0)).unwrap();
    assert!(!e11.apply(&f1).is_zero());
    assert!(f_invariant(&a, 0).is_err());
}

#[test]
fn f_minus_one_is_the_mirror_of_f_one() {
    let a = arena(1, 1, [1, 1, 1, 1]);
    // x_{ti} ↔ x*_{it}
    let mirror = |id: u32| match a.placement(id) {
        (crate::action::CopyRef::U(t), i) => a.xs_id(i, t),
        (crate::action::CopyRef::W(s), i) => a.x_id(s, i),
    };
    let m = f_invariant(&a, 1).unwrap().relabel(a.table(), mirror);
    let g = f_invariant(&a, -1).unwrap();
    assert!(m == g || m == -&g);
}

#[test]
fn p_invariants() {
    let a = arena(1, 1, [0, 0, 1, 1]);
    let p1 = p_invariant(&a, 1).unwrap();
    let pe = spec(Family::Pe, 1, 1);
    assert_eq!(p1, &a.xs(0, 0) * &form_inner(&a, &pe, 0, 0).unwrap());
    let spe = ds(&a, Family::Spe);
    let pe_ds = ds(&a, Family::Pe);
    for k in [1, -1, 2, -2] {
        let f = p_invariant(&a, k).unwrap();
        assert!(!f.is_zero());
        assert!(is_annihilated(&spe, &f), "k={k}");
        assert!(!is_annihilated(&pe_ds, &f), "k={k}");
    }
    assert_eq!(
        p_invariant(&a, -1).unwrap(),
        block_det(&a, BlockDet::OmegaStar).unwrap()
    );
    let b = arena(2, 2, [0, 0, 2, 2]);
    let spe2 = ds(&b, Family::Spe);
    for k in [1, -1] {
        assert!(is_annihilated(&spe2, &p_invariant(&b, k).unwrap()));
    }
    let c = arena(1, 1, [1, 0, 1, 1]);
    assert!(p_invariant(&c, 1).is_err());
}

#[test]
fn omega_at_one_one() {
    let a = arena(1, 2, [0, 0, 1, 2]);
    assert_eq!(omega_solution_space(&a).unwrap().len(), 1);
    let omega = omega_invariant(&a).unwrap();
    let x = a.xs(0, 0);
    // Ω = x³ + c·x·ξ₁ξ₂
    assert_eq!(omega.body(), x.pow(3));
    let rest = &omega - &x.pow(3);
    assert_eq!(rest.len(), 1);
    let (mono, c) = rest.iter().next().unwrap();
    assert_eq!(mono.exponent(a.xs_id(0, 0)), 1);
    assert_eq!(mono.odd_count(a.table()), 2);
    assert!(!c.is_zero());
    assert!(is_annihilated(&ds(&a, Family::Osp), &omega));
    assert_eq!(&omega * &omega, osp_gram_det(&a).unwrap().pow(3));
}

#[test]
fn z_and_y_shapes() {
    let a = arena(2, 2, [2, 0, 2, 0]);
    let z = z_matrix(&a).unwrap();
    let y = y_matrix(&a).unwrap();
    assert_eq!((z.n(), y.n()), (2, 2));
    assert!(z
        .a
        .iter()
        .flatten()
        .all(|e| e.parity() == Some(Parity::Even)));
    assert!(z
        .b
        .iter()
        .flatten()
        .all(|e| e.parity() == Some(Parity::Odd)));
    assert!(y
        .a
        .iter()
        .flatten()
        .all(|e| e.parity() == Some(Parity::Even)));
    assert!(y
        .b
        .iter()
        .flatten()
        .all(|e| e.parity() == Some(Parity::Odd)));
    let b = arena(1, 1, [1, 0, 1, 0]);
    assert_eq!(z_matrix(&b).unwrap().qtr(), q_bracket(&b, 0, 0).unwrap());
    assert!(z_matrix(&arena(1, 1, [1, 1, 1, 0])).is_err());
}

#[test]
fn q_lambda_one() {
    let a = arena(1, 1, [1, 0, 1, 0]);
    let q1 = q_lambda(&a, &part(&[1])).unwrap();
    assert!(!q1.is_zero());
    assert!(is_annihilated(&ds(&a, Family::Sq), &q1));
    assert!(!is_annihilated(&ds(&a, Family::Q), &q1));
    let f = g_derivation(&a, &q_complement_f(1)).unwrap();
    let fq = f.apply(&q1);
    let qtr_z = z_matrix(&a).unwrap().qtr();
    assert!(fq == qtr_z || fq == -&qtr_z);
}

#[test]
fn q_lambda_two_one() {
    let a = arena(2, 2, [2, 0, 2, 0]);
    let q = q_lambda(&a, &part(&[2, 1])).unwrap();
    assert_eq!(q.total_degree(), Some(6));
    assert!(is_annihilated(&ds(&a, Family::Sq), &q));
    assert!(!is_annihilated(&ds(&a, Family::Q), &q));
}

#[test]
fn q_lambda_rejects_bad_partitions() {
    let a = arena(2, 2, [2, 0, 2, 0]);
    assert!(matches!(q_lambda(&a, &part(&[3])), Err(Error::BadIndex(_))));
    assert!(matches!(
        q_lambda(&a, &part(&[2, 2])),
        Err(Error::BadIndex(_))
    ));
}

#[test]
fn fewer_parts_are_not_polynomial() {
    let a = arena(2, 2, [2, 0, 2, 0]);
    let v = qet_y(&a)
        .unwrap()
        .mul_poly(&qtr_power_product(&a, &part(&[1])).unwrap())
        .unwrap();
    assert!(!v.is_polynomial());
}

#[test]
fn constructors_are_invariant_and_homogeneous() {
    let a = arena(1, 1, [1, 1, 1, 1]);
    let f = f_invariant(&a, 2).unwrap();
    let md = a.multidegree(&f).unwrap();
    assert_eq!(md.total(), 6);
    let b = arena(1, 2, [0, 0, 1, 2]);
    let omega = omega_invariant(&b).unwrap();
    assert_eq!(b.multidegree(&omega).unwrap(), omega_weight(&b).unwrap());
    let c = arena(1, 1, [1, 0, 1, 0]);
    for lambda in [part(&[1]), part(&[2]), part(&[3])] {
        let q = q_lambda(&c, &lambda).unwrap();
        assert_eq!(
            c.multidegree(&q).unwrap().total() as usize,
            2 * lambda.size()
        );
        assert!(is_annihilated(&ds(&c, Family::Sq), &q));
    }
}

#[test]
fn sl_one_one_contains_the_identity() {
    // str(1) = 0 when n = m, so the identity kills every f_k
    let a = arena(1, 1, [1, 1, 1, 1]);
    let id = g_derivation(
        &a,
        &SuperMatrix::identity(&Format::standard(1, 1), &crate::algebras::constants()),
    )
    .unwrap();
    for k in [1, -1] {
        assert!(id.apply(&f_invariant(&a, k).unwrap()).is_zero());
    }
    assert_eq!(basis_of(&spec(Family::Sl, 1, 1)).unwrap().len(), 3);
}
