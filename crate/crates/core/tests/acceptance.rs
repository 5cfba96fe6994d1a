//! Acceptance checks, one line per criterion. Exits nonzero if any fails.

use std::sync::Arc;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use superinv::action::{
    all_polarizations, all_queer_polarizations, build_arena, g_derivation, Arena, CopySpec,
    Derivation,
};
use superinv::algebras::{basis_of, constants, q_complement_f, Family, FamilySpec};
use superinv::combinatorics::{cauchy_check, Partition};
use superinv::invariants::{self, BlockDet, PiProduct};
use superinv::sampling;
use superinv::solver::{
    family_derivations, is_annihilated, subalgebra_dims, verify_basic_set, CheckConfig,
    GradedReport, Member,
};
use superinv::supermatrix::{Format, QBlockMatrix, SuperMatrix};
use superinv::superpoly::{LocalizedElement, Polynomial, VarTable};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn arena(n: usize, m: usize, c: [usize; 4]) -> Arc<Arena> {
    build_arena(n, m, CopySpec::new(c[0], c[1], c[2], c[3])).expect("valid arena")
}

fn spec(f: Family, n: usize, m: usize) -> FamilySpec {
    FamilySpec::new(f, n, m).expect("valid family")
}

fn config(f: Family, n: usize, m: usize, c: [usize; 4], deg: u32) -> CheckConfig {
    CheckConfig::new(spec(f, n, m), CopySpec::new(c[0], c[1], c[2], c[3]), deg)
}

fn dims(r: &GradedReport) -> String {
    r.rows
        .iter()
        .map(|row| format!("{}/{}", row.dim_closure, row.dim_invariants))
        .collect::<Vec<_>>()
        .join(" ")
}

fn passing(c: &CheckConfig) -> Result<GradedReport, String> {
    let r = e(verify_basic_set(c))?;
    match r.first_failure() {
        None => Ok(r),
        Some(row) => Err(format!(
            "{} closure deficit at degree {}: {}",
            c.spec,
            row.degree,
            dims(&r)
        )),
    }
}

fn derivations(a: &Arena, f: Family) -> Result<Vec<Derivation>, String> {
    let (n, m) = a.dim_v();
    e(family_derivations(a, &spec(f, n, m)))
}

fn gl_basic_set() -> Outcome {
    let c = config(Family::Gl, 1, 1, [1, 1, 1, 1], 4);
    let r = passing(&c)?;
    let a = arena(1, 1, [1, 1, 1, 1]);
    let gens: Vec<Polynomial> = (0..2)
        .flat_map(|t| (0..2).map(move |s| (t, s)))
        .map(|(t, s)| invariants::scalar_product(&a, t, s).unwrap())
        .collect();
    let plain = e(subalgebra_dims(&a, &gens, 4))?;
    let kernel: Vec<usize> = r.rows.iter().map(|row| row.dim_invariants).collect();
    ensure(
        plain == kernel,
        format!("products of scalar products give {plain:?}, kernel {kernel:?}"),
    )?;
    Ok(format!(
        "closure/kernel {}; products alone {plain:?}",
        dims(&r)
    ))
}

fn sl_basic_set() -> Outcome {
    let a = arena(1, 1, [1, 1, 1, 1]);
    let sl = derivations(&a, Family::Sl)?;
    let gl = derivations(&a, Family::Gl)?;
    for k in [1, -1] {
        let f = e(invariants::f_invariant(&a, k))?;
        ensure(is_annihilated(&sl, &f), format!("f_{k} not sl-invariant"))?;
        ensure(!is_annihilated(&gl, &f), format!("f_{k} is gl-invariant"))?;
    }
    let with = passing(&config(Family::Sl, 1, 1, [1, 1, 1, 1], 5))?;
    let without = e(verify_basic_set(
        &config(Family::Sl, 1, 1, [1, 1, 1, 1], 4).omitting(Member::F),
    ))?;
    let row = &without.rows[4];
    ensure(
        row.dim_closure < row.dim_invariants,
        "closure without f is complete at degree 4",
    )?;
    Ok(format!(
        "with f: {}; without f at degree 4: {}/{}",
        dims(&with),
        row.dim_closure,
        row.dim_invariants
    ))
}

fn osp_basic_set() -> Outcome {
    let a = arena(1, 2, [0, 0, 1, 2]);
    let s = spec(Family::Osp, 1, 2);
    let osp = derivations(&a, Family::Osp)?;
    for i in 0..3 {
        for j in i..3 {
            ensure(
                is_annihilated(&osp, &e(invariants::form_inner(&a, &s, i, j))?),
                format!("(v{i},v{j}) not invariant"),
            )?;
        }
    }
    let space = e(invariants::omega_solution_space(&a))?;
    ensure(
        space.len() == 1,
        format!("Omega weight block has dimension {}", space.len()),
    )?;
    let omega = e(invariants::omega_invariant(&a))?;
    let gram = e(invariants::osp_gram_det(&a))?;
    ensure(&omega * &omega == gram.pow(3), "Omega^2 differs from det^3")?;
    let r = passing(&config(Family::Osp, 1, 2, [0, 0, 1, 2], 6))?;
    Ok(format!(
        "Omega unique, Omega^2 = det^3; closure/kernel {}",
        dims(&r)
    ))
}

fn pe_spe_basic_sets() -> Outcome {
    let a = arena(1, 1, [0, 0, 1, 1]);
    let s = spec(Family::Pe, 1, 1);
    let pe = derivations(&a, Family::Pe)?;
    let spe = derivations(&a, Family::Spe)?;
    for i in 0..2 {
        for j in i..2 {
            ensure(
                is_annihilated(&pe, &e(invariants::form_inner(&a, &s, i, j))?),
                format!("(v{i},v{j}) not pe-invariant"),
            )?;
        }
    }
    let basis = e(basis_of(&s))?;
    let mut witnesses = Vec::new();
    for k in [1, -1] {
        let p = e(invariants::p_invariant(&a, k))?;
        ensure(is_annihilated(&spe, &p), format!("p_{k} not spe-invariant"))?;
        let w = pe
            .iter()
            .position(|d| !d.apply(&p).is_zero())
            .ok_or(format!("p_{k} is pe-invariant"))?;
        witnesses.push(format!(
            "p_{k} moved by pe basis element {w} (str = {})",
            basis[w].str().canonical_text()
        ));
    }
    let rp = passing(&config(Family::Pe, 1, 1, [0, 0, 1, 1], 4))?;
    let rs = passing(&config(Family::Spe, 1, 1, [0, 0, 1, 1], 4))?;
    Ok(format!(
        "{}; pe {}; spe {}",
        witnesses.join(", "),
        dims(&rp),
        dims(&rs)
    ))
}

fn q_sq_basic_sets() -> Outcome {
    let a = arena(1, 1, [1, 0, 1, 0]);
    let q = derivations(&a, Family::Q)?;
    let sq = derivations(&a, Family::Sq)?;
    ensure(
        is_annihilated(&q, &e(invariants::scalar_product(&a, 0, 0))?),
        "scalar product not q-invariant",
    )?;
    ensure(
        is_annihilated(&q, &e(invariants::q_bracket(&a, 0, 0))?),
        "odd pairing not q-invariant",
    )?;
    let rq = passing(&config(Family::Q, 1, 1, [1, 0, 1, 0], 4))?;
    let rsq = passing(&config(Family::Sq, 1, 1, [1, 0, 1, 0], 4))?;
    let lambda = Partition::new(vec![1]).expect("partition");
    let q1 = e(invariants::q_lambda(&a, &lambda))?;
    ensure(is_annihilated(&sq, &q1), "q_(1) not sq-invariant")?;
    ensure(!is_annihilated(&q, &q1), "q_(1) is q-invariant")?;
    let f = e(g_derivation(&a, &q_complement_f(1)))?;
    let fq = f.apply(&q1);
    let qtr = e(invariants::z_matrix(&a))?.qtr();
    let sign = if fq == qtr {
        "+"
    } else if fq == -&qtr {
        "-"
    } else {
        return Err(format!("F(q_(1)) = {} is not ±qtr Z", fq.canonical_text()));
    };
    Ok(format!(
        "q {}; sq {}; F(q_(1)) = {sign}qtr(Z)",
        dims(&rq),
        dims(&rsq)
    ))
}

fn cauchy() -> Outcome {
    let mut totals = Vec::new();
    for (u, v) in [((1, 1), (1, 1)), ((2, 1), (1, 2))] {
        for k in 0..=4 {
            let r = cauchy_check(u, v, k);
            ensure(
                r.holds(),
                format!("U={u:?} V={v:?} k={k}: {} vs {}", r.lhs, r.rhs),
            )?;
            totals.push(r.lhs.to_string());
        }
    }
    Ok(format!("dimensions {}", totals.join(" ")))
}

fn localized_poly(x: LocalizedElement) -> Result<Polynomial, String> {
    e(x.into_polynomial())
}

fn qet_and_ber() -> Outcome {
    let table = VarTable::grassmann(5);
    let mut rng = sampling::rng(20_241_015);
    for i in 0..100 {
        let n = 1 + i % 2;
        let x = sampling::q_point(&mut rng, &table, n);
        let y = sampling::q_point(&mut rng, &table, n);
        let xy = e(QBlockMatrix::from_supermatrix(&e(x
            .to_supermatrix()
            .matmul(&y.to_supermatrix()))?))?;
        let lhs = localized_poly(e(xy.qet())?)?;
        let rhs = &localized_poly(e(x.qet())?)? + &localized_poly(e(y.qet())?)?;
        ensure(lhs == rhs, format!("qet additivity fails on sample {i}"))?;
    }
    for i in 0..100 {
        let n = 1 + i % 2;
        let m = sampling::nilpotent_q(&mut rng, &table, n);
        let exp = e(QBlockMatrix::from_supermatrix(&e(m
            .to_supermatrix()
            .exp_nilpotent())?))?;
        ensure(
            localized_poly(e(exp.qet())?)? == m.qtr(),
            format!("qet(exp M) != qtr M on sample {i}"),
        )?;
    }
    let t4 = VarTable::grassmann(4);
    for i in 0..100 {
        let f = Format::standard(1 + i % 2, 1 + (i / 2) % 2);
        let x = sampling::invertible_even_matrix(&mut rng, &t4, &f);
        let y = sampling::invertible_even_matrix(&mut rng, &t4, &f);
        let bxy = localized_poly(e(e(x.matmul(&y))?.berezinian())?)?;
        let prod = &localized_poly(e(x.berezinian())?)? * &localized_poly(e(y.berezinian())?)?;
        ensure(bxy == prod, format!("Ber not multiplicative on sample {i}"))?;
    }
    Ok("100 additivity, 100 exp, 100 Ber samples".into())
}

fn representation() -> Outcome {
    let cases = [
        (Family::Gl, 1, 1, [1, 1, 1, 1]),
        (Family::Osp, 1, 2, [0, 0, 1, 2]),
        (Family::Pe, 1, 1, [0, 0, 1, 1]),
        (Family::Q, 1, 1, [1, 0, 1, 0]),
    ];
    let mut checked = 0;
    for (f, n, m, c) in cases {
        let a = arena(n, m, c);
        let basis = e(basis_of(&spec(f, n, m)))?;
        let ds: Vec<Derivation> = basis
            .iter()
            .map(|x| g_derivation(&a, x))
            .collect::<Result<_, _>>()
            .map_err(|err| err.to_string())?;
        for (x, dx) in basis.iter().zip(&ds) {
            for (y, dy) in basis.iter().zip(&ds) {
                let rhs = e(g_derivation(&a, &e(x.bracket(y))?))?;
                ensure(
                    dx.bracket(dy).same_as(&rhs),
                    format!("{f}: bracket mismatch"),
                )?;
                checked += 1;
            }
        }
        let mut pols = all_polarizations(&a);
        if f == Family::Q {
            pols.extend(e(all_queer_polarizations(&a))?);
        }
        for p in &pols {
            ensure(
                ds.iter().all(|d| p.bracket(d).is_zero()),
                format!("{f}: a polarization does not supercommute"),
            )?;
        }
    }
    Ok(format!(
        "{checked} brackets on gl(1|1), osp(1|2), pe(1), q(1); polarizations commute"
    ))
}

fn raising_spot_check() -> Outcome {
    let a = arena(1, 1, [0, 0, 1, 0]);
    let raise = e(g_derivation(
        &a,
        &SuperMatrix::unit(&Format::standard(1, 1), &constants(), 0, 1),
    ))?;
    let delta = e(invariants::block_det(&a, BlockDet::DeltaStar))?;
    let pi = e(invariants::pi_product(&a, PiProduct::Pi10Star))?;
    let img = superinv::action::compose_derivations(&[raise], &delta.pow(2));
    let target = &delta * &pi;
    let (mono, tc) = target.iter().next().ok_or("Δ*·Π₁₀* vanishes")?;
    let c: BigRational = img.coeff(mono) / tc;
    ensure(!c.is_zero(), "image has no Δ*·Π₁₀* component")?;
    ensure(
        img == target.scale(&c),
        format!("image {} is not a multiple", img.canonical_text()),
    )?;
    Ok(format!("constant {c}"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("gl basic set on (1|1)", gl_basic_set),
        ("sl basic set with f_±k", sl_basic_set),
        ("osp(1|2) inner products and Omega", osp_basic_set),
        ("pe and spe basic sets", pe_spe_basic_sets),
        ("q and sq basic sets, q_(1)", q_sq_basic_sets),
        ("super Cauchy dimensions", cauchy),
        ("qet and Berezinian identities", qet_and_ber),
        ("representation property", representation),
        ("odd raising operator on Δ*²", raising_spot_check),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
