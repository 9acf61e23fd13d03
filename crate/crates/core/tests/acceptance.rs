//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use agcalc::corpus::{gen_corpus, CorpusMap, CorpusSpec, Family};
use agcalc::inversion::{
    invert_with, methods_agree, round_trip, verify_phi_identity, InversionOptions, Method,
};
use agcalc::lab::{
    deformed_jacobian_det, is_nilpotent, jacobian_gt_series, nt_series, vanishing_scan,
    DEFAULT_TERM_CEILING,
};
use agcalc::matrix::jacobian_det_of_z_minus;
use agcalc::rational::{factorial, int};
use agcalc::weyl::{op_mul, tau, verify_phi_is_rl_inv, DiffOp};
use agcalc::{MapTuple, MultiIndex, SeriesTrunc, SparsePoly, VarSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const D: u32 = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: true,
        detail: detail.into(),
    }
}

fn bad(detail: impl Into<String>) -> Outcome {
    Outcome {
        pass: false,
        detail: detail.into(),
    }
}

fn corpus() -> Vec<CorpusMap> {
    gen_corpus(&CorpusSpec::default()).expect("default corpus")
}

fn audited() -> InversionOptions {
    InversionOptions { audit: true }
}

fn cross_method(corpus: &[CorpusMap]) -> (Outcome, usize, usize) {
    let start = Instant::now();
    let mut checked = 0;
    let mut violations = 0;
    for m in corpus {
        let results: Vec<_> = Method::ALL
            .iter()
            .map(|&meth| invert_with(&m.h, D, meth, audited()).unwrap())
            .collect();
        for r in &results {
            checked += r.audit.checked;
            violations += r.audit.violations.len();
        }
        let c = methods_agree(&results);
        if !c.pass {
            return (
                bad(format!("{}: {} {:?}", m.id, c.name, c.witness)),
                checked,
                violations,
            );
        }
    }
    let elapsed = start.elapsed();
    let dims: std::collections::BTreeSet<_> = corpus.iter().map(|m| m.n()).collect();
    let out = if corpus.len() < 20 {
        bad(format!("corpus has only {} maps", corpus.len()))
    } else if elapsed > Duration::from_secs(120) {
        bad(format!("took {elapsed:.1?}"))
    } else {
        ok(format!(
            "{} maps, n in {:?}, D = {D}, {:.1?}",
            corpus.len(),
            dims,
            elapsed
        ))
    };
    (out, checked, violations)
}

fn round_trips(corpus: &[CorpusMap]) -> Outcome {
    for m in corpus {
        let g = invert_with(&m.h, D, Method::FixedPoint, audited())
            .unwrap()
            .g;
        for c in round_trip(&m.h, &g, D).unwrap() {
            if !c.pass {
                return bad(format!("{}: {} {:?}", m.id, c.name, c.witness));
            }
        }
    }
    ok(format!(
        "F(G) = G(F) = z mod deg > {D} on {} maps",
        corpus.len()
    ))
}

fn catalan() -> Outcome {
    let v = VarSet::z(1);
    let h = MapTuple::exact(vec![SparsePoly::z(v, 0).pow(2, None)]).unwrap();
    let expected = [1, 1, 2, 5, 14, 42];
    for meth in Method::ALL {
        let g = invert_with(&h, 6, meth, audited()).unwrap().g;
        let got: Vec<_> = (1..=6)
            .map(|k| g.component(0).coeff(&MultiIndex::from_slice(&[k])))
            .collect();
        if got != expected.map(int) {
            return bad(format!("{meth}: {got:?}"));
        }
    }
    ok("1, 1, 2, 5, 14, 42 from all three methods")
}

fn phi_rl() -> Outcome {
    let mut count = 0;
    let v2 = VarSet::xi_z(2);
    for a in MultiIndex::all_up_to(2, 3) {
        for b in MultiIndex::all_up_to(2, 4) {
            let mut e = MultiIndex::zeros(4);
            for i in 0..2 {
                e.set(i, a[i]);
                e.set(2 + i, b[i]);
            }
            let f = SparsePoly::monomial(v2, e, int(1));
            let c = verify_phi_is_rl_inv(&f).unwrap();
            if !c.pass {
                return bad(format!("{f}: {:?}", c.witness));
            }
            count += 1;
        }
    }
    let v3 = VarSet::xi_z(3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut spot = 0;
    for _ in 0..40 {
        let mut e = MultiIndex::zeros(6);
        for i in 0..6 {
            e.set(i, rng.gen_range(0..=2));
        }
        let f = SparsePoly::monomial(v3, e, int(1));
        let c = verify_phi_is_rl_inv(&f).unwrap();
        if !c.pass {
            return bad(format!("{f}: {:?}", c.witness));
        }
        spot += 1;
    }
    ok(format!(
        "{count} monomials at n = 2, {spot} spot monomials at n = 3"
    ))
}

fn random_op(rng: &mut ChaCha8Rng, n: usize) -> DiffOp {
    let v = VarSet::xi_z(n);
    let mut f = SparsePoly::zero(v);
    for _ in 0..rng.gen_range(1..=4) {
        let mut e = MultiIndex::zeros(2 * n);
        let xdeg = rng.gen_range(0..=3);
        let zdeg = rng.gen_range(0..=3);
        for _ in 0..xdeg {
            let i = rng.gen_range(0..n);
            e.set(i, e[i] + 1);
        }
        for _ in 0..zdeg {
            let i = n + rng.gen_range(0..n);
            e.set(i, e[i] + 1);
        }
        f = &f + &SparsePoly::monomial(v, e, int(rng.gen_range(-5..=5)));
    }
    DiffOp::from_right_symbol(f).unwrap()
}

fn tau_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..200 {
        let n = 1 + k % 3;
        let phi = random_op(&mut rng, n);
        let psi = random_op(&mut rng, n);
        if tau(&tau(&phi)) != phi {
            return bad(format!("tau^2 != id on {phi}"));
        }
        let lhs = tau(&op_mul(&phi, &psi).unwrap());
        let rhs = op_mul(&tau(&psi), &tau(&phi)).unwrap();
        if lhs != rhs {
            return bad(format!(
                "tau(phi psi) != tau(psi) tau(phi) for {phi} ; {psi}"
            ));
        }
    }
    ok("tau^2 = id and tau(phi psi) = tau(psi) tau(phi) on 200 pairs, n in 1..=3")
}

fn window_identity(corpus: &[CorpusMap]) -> Outcome {
    let pick = |f: Family, k: usize| corpus.iter().filter(move |m| m.family == f).take(k);
    let chosen: Vec<&CorpusMap> = pick(Family::Triangular, 3)
        .chain(pick(Family::ConjugatedCubic, 1))
        .chain(pick(Family::Control, 3))
        .chain(pick(Family::RandomSeries, 3))
        .collect();
    let mut nontrivial = 0;
    for m in &chosen {
        let h7 = m.h.representative(7).unwrap();
        if jacobian_det_of_z_minus(&h7, Some(6)) != SparsePoly::one(m.h.vars()) {
            nontrivial += 1;
        }
        let z1 = SparsePoly::z(m.h.vars(), 0);
        let qs = [SparsePoly::one(m.h.vars()), &z1 + &z1.pow(2, None)];
        for q in qs {
            for (k, d) in [(3, 6), (2, 5), (1, 4)] {
                let c = verify_phi_identity(&m.h, &SeriesTrunc::exact(q.clone()), k, d).unwrap();
                if !c.pass {
                    return bad(format!("{} q = {q}: {} {:?}", m.id, c.name, c.witness));
                }
            }
        }
    }
    if chosen.len() < 10 || nontrivial < 3 {
        return bad(format!("{} maps, {nontrivial} with JF != 1", chosen.len()));
    }
    ok(format!(
        "{} maps ({nontrivial} with JF != 1), q in {{1, z1 + z1^2}}, (K, D) in {{(3,6), (2,5), (1,4)}}",
        chosen.len()
    ))
}

fn equivalence(corpus: &[CorpusMap]) -> Outcome {
    let (mut nil, mut ctl) = (0, 0);
    for m in corpus.iter().filter(|m| m.nilpotent.is_some()) {
        let cert = is_nilpotent(&m.h).unwrap();
        let scan = vanishing_scan(&m.h, 0, 6, DEFAULT_TERM_CEILING).unwrap();
        if m.nilpotent == Some(true) {
            if !cert.nilpotent || !scan.all_zero() {
                return bad(format!(
                    "{}: det = {}, scan {:?}",
                    m.id, cert.certificate, scan.first_nonzero
                ));
            }
            nil += 1;
        } else {
            let n = m.n() as u32;
            let Some(w) = scan.first_nonzero.filter(|&w| w <= n) else {
                return bad(format!("{}: no witness at m <= {n}", m.id));
            };
            let (k, ck) = cert.first_coefficient().unwrap();
            let f = factorial(k);
            let scale = -agcalc::Rational::from_integer(&f * &f);
            let expected = ck.scale(&scale).embed(VarSet::xi_z(m.n())).unwrap();
            if cert.nilpotent || w != k || scan.value(w) != Some(&expected) {
                return bad(format!(
                    "{}: witness m = {w}, determinant predicts t^{k}",
                    m.id
                ));
            }
            ctl += 1;
        }
    }
    ok(format!(
        "{nil} nilpotent instances vanish for 1 <= m <= 6; {ctl} controls have a witness at m <= n"
    ))
}

fn deformation(corpus: &[CorpusMap]) -> Outcome {
    let exact: Vec<_> = corpus.iter().filter(|m| m.h.is_exact()).collect();
    let mut jg = 0;
    for m in exact.iter().take(10) {
        let s = match jacobian_gt_series(&m.h, 4) {
            Ok(s) => s,
            Err(e) => return bad(format!("{}: {e}", m.id)),
        };
        if m.nilpotent == Some(true) && s != SparsePoly::one(s.vars()) {
            return bad(format!("{}: JG_t = {s}", m.id));
        }
        jg += 1;
    }
    let mut nt = 0;
    for m in corpus.iter().filter(|m| m.nilpotent == Some(true)) {
        let d = m.inverse_t_degree.unwrap();
        let mm = (d + 2).max(4);
        let series = match nt_series(&m.h, mm) {
            Ok(s) => s,
            Err(e) => return bad(format!("{}: {e}", m.id)),
        };
        let scan = vanishing_scan(&m.h, 1, mm, DEFAULT_TERM_CEILING).unwrap();
        if scan.stabilization_index() != Some(d) {
            return bad(format!(
                "{}: stabilization {:?}, known t-degree {d}",
                m.id,
                scan.stabilization_index()
            ));
        }
        let known = m.known_inverse_t.as_ref().unwrap();
        let vt = VarSet::z_t(m.n());
        for i in 0..m.n() {
            let expect = (known.component(i) - &SparsePoly::z(vt, i))
                .div_t()
                .unwrap();
            if series.n_t.component(i) != &expect {
                return bad(format!(
                    "{}: N_t component {} differs from closed form",
                    m.id,
                    i + 1
                ));
            }
        }
        if deformed_jacobian_det(&m.h).unwrap() != SparsePoly::one(vt) {
            return bad(format!("{}: JF_t != 1", m.id));
        }
        nt += 1;
    }
    if jg < 10 {
        return bad(format!("only {jg} JG_t instances"));
    }
    ok(format!(
        "JG_t matches oracle to t^4 on {jg} maps; N_t and stabilization index match on {nt} nilpotent maps"
    ))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let mut results = Vec::new();
    let (c1, checked, violations) = cross_method(&corpus);
    results.push(("1 cross-method inversion", c1));
    results.push(("2 round trip", round_trips(&corpus)));
    results.push(("3 catalan", catalan()));
    results.push(("4 phi = R o L^-1", phi_rl()));
    results.push(("5 tau anti-involution", tau_suite()));
    results.push(("6 window identity", window_identity(&corpus)));
    results.push(("7 nilpotency equivalence", equivalence(&corpus)));
    results.push(("8 deformation identities", deformation(&corpus)));
    let audit = if violations == 0 && checked > 0 {
        ok(format!("{checked} discarded shells checked, 0 violations"))
    } else {
        bad(format!("{violations} violations out of {checked}"))
    };
    results.push(("9 cutoff audit", audit));

    let mut all = true;
    for (name, o) in &results {
        all &= o.pass;
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
