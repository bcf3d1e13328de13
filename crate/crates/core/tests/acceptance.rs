//! Acceptance checks. Each prints one `criterion N: PASS|FAIL` line; the
//! process exits nonzero if any check fails.

mod common;

use std::collections::HashMap;
use std::time::Instant;

use common::*;
use dfol::dmod::*;
use dfol::foliation::*;
use dfol::groebner::{groebner_basis, ideal_membership, is_unit_ideal};
use dfol::linalg::{Echelon, SparseVec};
use dfol::weyl::{bernstein_basis, symbol_vars};
use dfol::{vars, GaussianRational, Monomial, MonomialOrder, Poly, Vars, WeylOp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn gr(n: i64) -> GaussianRational {
    GaussianRational::from_integer(n)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn same_ideal(v: &Vars, a: &[Poly], b: &[Poly]) -> bool {
    let ga = groebner_basis(v, a, MonomialOrder::GrevLex).unwrap();
    let gb = groebner_basis(v, b, MonomialOrder::GrevLex).unwrap();
    ga == gb
}

fn at_levels(report: &TruncatedCohomologyReport, k: usize, levels: &[u32]) -> Vec<usize> {
    levels
        .iter()
        .map(|m| {
            let i = report.levels.iter().position(|l| l == m).expect("level computed");
            report.dims[k][i]
        })
        .collect()
}

fn criterion1(dd: &mut Vec<bool>) -> Outcome {
    let f = euler();
    let v = f.vars().clone();
    let p = |s: &str| Poly::parse(s, &v).unwrap();

    let profile = rank_profile(&f).unwrap();
    ensure((profile.rk, profile.cork, profile.irr) == (1, 0, 1), format!("profile {profile:?}"))?;

    let s = strata(&f).unwrap();
    ensure(s.len() == 2, format!("{} strata", s.len()))?;
    ensure(s[0].vanishing_ideal.iter().all(Poly::is_zero) && s[0].closure_dimension == 2, "X0 closure is not C^2")?;
    ensure(same_ideal(&v, &s[0].nonvanishing_ideal, &[p("x"), p("y")]), "X0 does not remove the origin")?;
    ensure(s[0].nonempty && s[1].nonempty, "empty stratum")?;
    ensure(same_ideal(&v, &s[1].vanishing_ideal, &[p("x"), p("y")]) && s[1].closure_dimension == 0, "X1 is not the origin")?;

    let ch = characteristic_variety(&f).unwrap();
    let sv = symbol_vars(&v);
    let expected = Poly::parse("x*xi_x + y*xi_y", &sv).unwrap();
    let gens: Vec<Poly> = ch.generators.iter().map(|g| g.poly.clone()).collect();
    ensure(same_ideal(&sv, &gens, &[expected]) && ch.codimension == 1, "characteristic variety")?;

    let witness = top_cohomology_witness(&f).unwrap();
    ensure(witness == Witness::Found(vec![gr(0), gr(0)]), format!("witness {witness:?}"))?;

    let cohom = truncated_endo_cohomology(&f, &TruncationConfig::default()).unwrap();
    dd.extend(cohom.dd_zero.iter().copied());
    let h1 = at_levels(&cohom, 1, &[4, 5, 6]);
    ensure(h1.iter().all(|&d| d > 0) && cohom.stabilized_nonzero[1], format!("H1 at m=4..6: {h1:?}"))?;

    let dirr = assemble_d_irregularity(&cohom, &witness, &profile);
    ensure(dirr.d_irr == 1 && dirr.geometric_irr == 1 && dirr.theorem1_consistent, "d_irr")?;
    Ok(format!("rk 1 cork 0 irr 1, H1 dims {h1:?} at m=4..6, d_irr 1"))
}

fn criterion2(dd: &mut Vec<bool>) -> Outcome {
    let f = diagonal();
    let hyp = check_hypotheses(&f).unwrap();
    ensure(hyp.passed(), "hypotheses fail")?;
    let cfg = TruncationConfig { m_max: 5, ..TruncationConfig::default() };
    let cohom = truncated_endo_cohomology(&f, &cfg).unwrap();
    dd.extend(cohom.dd_zero.iter().copied());
    let h1 = at_levels(&cohom, 1, &[3, 4, 5]);
    let h2 = at_levels(&cohom, 2, &[3, 4, 5]);
    ensure(h1.iter().chain(&h2).all(|&d| d > 0), format!("H1 {h1:?} H2 {h2:?}"))?;
    ensure(cohom.stabilized_nonzero[1] && cohom.stabilized_nonzero[2], "not stabilized by m=5")?;
    let witness = top_cohomology_witness(&f).unwrap();
    ensure(witness == Witness::Found(vec![gr(0), gr(0)]), format!("witness {witness:?}"))?;
    let profile = rank_profile(&f).unwrap();
    let dirr = assemble_d_irregularity(&cohom, &witness, &profile);
    ensure(dirr.d_irr == 2 && profile.irr == 2 && dirr.theorem1_consistent, "d_irr")?;
    Ok(format!("H1 {h1:?} H2 {h2:?} at m=3..5, d_irr 2 = irr"))
}

fn criterion3(dd: &mut Vec<bool>) -> Outcome {
    let f = translation();
    let profile = rank_profile(&f).unwrap();
    ensure(profile.irr == 0, format!("irr {}", profile.irr))?;
    let cohom = truncated_endo_cohomology(&f, &TruncationConfig::default()).unwrap();
    dd.extend(cohom.dd_zero.iter().copied());
    ensure(*cohom.levels.last().unwrap() == 6, "levels do not reach 6")?;
    for k in 1..cohom.dims.len() {
        ensure(cohom.dims[k].iter().all(|&d| d == 0), format!("H{k} = {:?}", cohom.dims[k]))?;
    }
    let witness = top_cohomology_witness(&f).unwrap();
    let dirr = assemble_d_irregularity(&cohom, &witness, &profile);
    ensure(dirr.d_irr == 0 && dirr.theorem1_consistent, "d_irr")?;
    Ok(format!("H0 {:?}, higher cohomology zero, d_irr 0", cohom.dims[0]))
}

fn criterion4() -> Outcome {
    let cases = [
        ("euler", euler(), true),
        ("dx", translation(), true),
        ("x*dx, y*dy", diagonal(), true),
        ("symplectic", symplectic(), true),
        ("x*dx on C", field(&["x"], &["x*dx"]), false),
    ];
    let mut wrong = Vec::new();
    let mut seen = Vec::new();
    for (name, f, expected) in cases {
        let got = double_orthogonal_check(&f).unwrap();
        seen.push(format!("{name}={got}"));
        if got != expected {
            wrong.push(format!("{name}: expected {expected}, got {got}"));
        }
    }
    if wrong.is_empty() {
        Ok(seen.join(", "))
    } else {
        Err(format!("{} ({})", wrong.join("; "), seen.join(", ")))
    }
}

fn criterion5() -> Outcome {
    let mut checked = Vec::new();
    for e in corpus() {
        let f = &e.foliation;
        if !check_hypotheses(f).unwrap().passed() {
            continue;
        }
        let rk = rank_profile(f).unwrap().rk;
        let ch = characteristic_variety(f).map_err(|err| format!("{}: {err}", e.name))?;
        ensure(ch.codimension == rk as i64, format!("{}: codim {} rk {rk}", e.name, ch.codimension))?;
        let kz = koszul_graded_exactness(f, 4).unwrap();
        let r = kz.dims.len() - 1;
        for p in 0..r {
            ensure(kz.dims[p].iter().all(|&d| d == 0), format!("{}: Koszul H{p} = {:?}", e.name, kz.dims[p]))?;
        }
        checked.push(e.name);
    }
    let v = vars(&["x", "xi1", "xi2"]).unwrap();
    let elems = [Poly::parse("x*xi1", &v).unwrap(), Poly::parse("x*xi2", &v).unwrap()];
    let kz = koszul_cohomology(&v, &elems, 4).unwrap();
    ensure(kz.dims[1].iter().any(|&d| d > 0), format!("H1 of (x*xi1, x*xi2) = {:?}", kz.dims[1]))?;
    Ok(format!("{} entries ({}), H1 of (x*xi1, x*xi2) = {:?}", checked.len(), checked.join(", "), kz.dims[1]))
}

fn criterion6() -> Outcome {
    let cases = [
        (euler(), vec!["1"]),
        (translation(), vec!["1", "y", "y^2", "y^3"]),
        (field(&["x", "y"], &["x*dy"]), vec!["1", "x", "x^2", "x^3"]),
    ];
    for (f, expected) in cases {
        let got = first_integrals(&f, 3).unwrap();
        let want: Vec<Poly> = expected.iter().map(|s| Poly::parse(s, f.vars()).unwrap()).collect();
        let shown: Vec<String> = got.iter().map(|p| p.to_string()).collect();
        ensure(got == want, format!("expected {expected:?}, got {shown:?}"))?;
    }
    Ok("euler {1}, dx {1,y,y^2,y^3}, x*dy {1,x,x^2,x^3}".into())
}

fn criterion7() -> Outcome {
    let mut counts = (0, 0);
    for e in corpus() {
        let f = &e.foliation;
        let witness = top_cohomology_witness(f).unwrap();
        let unit = is_unit_ideal(f.vars(), &f.all_coefficients()).unwrap();
        ensure(witness.exists() != unit, format!("{}: witness {witness:?}, unit ideal {unit}", e.name))?;
        if unit {
            counts.1 += 1;
        } else {
            counts.0 += 1;
        }
    }
    Ok(format!("{} entries with a common zero, {} with unit coefficient ideal", counts.0, counts.1))
}

fn random_poly(rng: &mut ChaCha8Rng, v: &Vars, max_deg: u32) -> Poly {
    loop {
        let mut p = Poly::zero(v);
        for _ in 0..rng.gen_range(1..=4) {
            let a = rng.gen_range(0..=max_deg);
            let b = rng.gen_range(0..=max_deg - a);
            let c = loop {
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    break c;
                }
            };
            p.add_term(Monomial(vec![a, b]), &gr(c));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Whether `p` is a combination `sum a_j g_j` with every `deg a_j <= bound`.
fn bounded_membership(p: &Poly, gens: &[Poly], bound: u32) -> bool {
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    let mut to_vec = |q: &Poly| -> SparseVec {
        q.terms()
            .map(|(m, c)| {
                let n = index.len();
                (*index.entry(m.clone()).or_insert(n), c.clone())
            })
            .collect()
    };
    let mut span = Echelon::new();
    for g in gens {
        for a in 0..=bound {
            for b in 0..=bound - a {
                let shifted = g.mul_monomial(&Monomial(vec![a, b]), &gr(1));
                span.add(to_vec(&shifted));
            }
        }
    }
    let target = to_vec(p);
    span.contains(&target)
}

fn random_weyl(rng: &mut ChaCha8Rng, basis: &[WeylOp]) -> WeylOp {
    let mut op = WeylOp::zero(basis[0].vars());
    for _ in 0..rng.gen_range(1..=3) {
        let m = &basis[rng.gen_range(0..basis.len())];
        op = op.checked_add(&m.scale(&gr(rng.gen_range(-3..=3)))).unwrap();
    }
    op
}

fn criterion8(dd: &mut Vec<bool>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let v = vars(&["x", "y"]).unwrap();
    let (mut members, mut disagreements) = (0, Vec::new());
    for i in 0..100 {
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<Poly> = (0..ngens).map(|_| random_poly(&mut rng, &v, 3)).collect();
        let p = if rng.gen_bool(0.5) {
            let mut acc = Poly::zero(&v);
            for g in &gens {
                acc = &acc + &(&random_poly(&mut rng, &v, 3) * g);
            }
            acc
        } else {
            random_poly(&mut rng, &v, 3)
        };
        let gb = ideal_membership(&p, &gens).unwrap();
        let la = bounded_membership(&p, &gens, 6);
        members += gb as usize;
        if gb != la {
            disagreements.push(format!("instance {i}: groebner {gb}, linear algebra {la}"));
        }
    }
    ensure(disagreements.is_empty(), disagreements.join("; "))?;

    let basis = bernstein_basis(&v, 3);
    for _ in 0..200 {
        let (a, b, c) = (random_weyl(&mut rng, &basis), random_weyl(&mut rng, &basis), random_weyl(&mut rng, &basis));
        let left = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        let right = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
        ensure(left == right, format!("associativity fails for {a}, {b}, {c}"))?;
    }

    let cfg = TruncationConfig { m_max: 4, ..TruncationConfig::default() };
    for e in corpus() {
        if check_hypotheses(&e.foliation).unwrap().passed() {
            let cohom = truncated_endo_cohomology(&e.foliation, &cfg).unwrap();
            dd.extend(cohom.dd_zero.iter().copied());
        }
    }
    ensure(dd.iter().all(|&b| b), "d∘d ≠ 0 in some complex")?;
    Ok(format!(
        "100 membership instances agree ({members} members), 200 associative triples, d∘d = 0 on {} levels",
        dd.len()
    ))
}

fn main() {
    let mut dd = Vec::new();
    let mut failed = 0;
    let mut report = |n: usize, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {n}: PASS ({secs:.2}s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL ({secs:.2}s) {msg}");
            }
        }
    };
    report(1, &mut || criterion1(&mut dd));
    report(2, &mut || criterion2(&mut dd));
    report(3, &mut || criterion3(&mut dd));
    report(4, &mut criterion4);
    report(5, &mut criterion5);
    report(6, &mut criterion6);
    report(7, &mut criterion7);
    report(8, &mut || criterion8(&mut dd));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
