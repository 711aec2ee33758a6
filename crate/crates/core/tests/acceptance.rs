//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails other than the documented conflicts.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use liesplit_core::decomp::{block_decomposition, splitness_check, theorem_1_1_report, MSet};
use liesplit_core::functors::{
    bracket_operator, equivariant_iso_check, evaluate, functorial_tn_projective_check, subhopf_evaluate, FunctorSpec,
};
use liesplit_core::hilton::{basic_products, hilbert_series_d_dims, multiplicity, verify_theorem61, Mode};
use liesplit_core::liealg::{lie_module, lyndon_basis, restricted_lie_power, witt_dim};
use liesplit_core::natural::factorial;
use liesplit_core::sgmod::{
    decomposition_signature, gamma, indecomposable_decomposition, max_projective_summand, phi_map, tensor_over_group,
    tor1_dim, DecompositionOptions, LeftModule, Side, SigmaModule,
};
use liesplit_core::tensoralg::{antipode, concat, coproduct, primitives, word_coproduct};
use liesplit_core::{make_field, FieldRef, Matrix, NaturalTransform, Scalar, Tensor, Word};

type Check = std::result::Result<String, String>;

/// A criterion outcome; `known_conflict` marks a failure whose cause is
/// documented and was verified to be exactly that cause.
struct Outcome {
    result: Check,
    known_conflict: bool,
}

impl From<Check> for Outcome {
    fn from(result: Check) -> Self {
        Outcome { result, known_conflict: false }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn words(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|w| (1..=m).map(move |l| [w.clone(), vec![l]].concat())).collect();
    }
    out
}

fn word_tensor(field: &FieldRef, m: usize, letters: &[usize]) -> Tensor {
    Tensor::word(field, m, letters).unwrap()
}

fn criterion_1() -> Check {
    let mut checked = 0usize;
    for p in [2u32, 3] {
        let field = make_field(p, 1).map_err(err)?;
        for m in 1..=3 {
            for n in 0..=6 {
                for w in words(n, m) {
                    let word = Word::new(&w, m).map_err(err)?;
                    // coassociativity against the direct sum over three-part position splits
                    let mut left: BTreeMap<(Vec<u8>, Vec<u8>, Vec<u8>), u32> = BTreeMap::new();
                    let mut right = left.clone();
                    for (a, b) in word_coproduct(&word) {
                        for (a1, a2) in word_coproduct(&a) {
                            *left
                                .entry((a1.letters().to_vec(), a2.letters().to_vec(), b.letters().to_vec()))
                                .or_default() += 1;
                        }
                        for (b1, b2) in word_coproduct(&b) {
                            *right
                                .entry((a.letters().to_vec(), b1.letters().to_vec(), b2.letters().to_vec()))
                                .or_default() += 1;
                        }
                    }
                    let mut direct: BTreeMap<(Vec<u8>, Vec<u8>, Vec<u8>), u32> = BTreeMap::new();
                    for code in 0..3usize.pow(n as u32) {
                        let mut parts = (Vec::new(), Vec::new(), Vec::new());
                        let mut c = code;
                        for &l in word.letters() {
                            match c % 3 {
                                0 => parts.0.push(l),
                                1 => parts.1.push(l),
                                _ => parts.2.push(l),
                            }
                            c /= 3;
                        }
                        *direct.entry(parts).or_default() += 1;
                    }
                    let reduce = |m: BTreeMap<_, u32>| -> BTreeMap<_, u32> {
                        m.into_iter().map(|(k, v)| (k, v % p)).filter(|(_, v)| *v != 0).collect()
                    };
                    let (left, right, direct) = (reduce(left), reduce(right), reduce(direct));
                    ensure!(left == direct && right == direct, "coassociativity fails on {w:?} over GF({p})");

                    let t = word_tensor(&field, m, &w);
                    let psi = coproduct(&t);
                    ensure!(psi == psi.swap(), "cocommutativity fails on {w:?}");

                    let conv = |first_antipode: bool| {
                        let id = |x: &Word| {
                            word_tensor(&field, m, &x.letters().iter().map(|&l| l as usize).collect::<Vec<_>>())
                        };
                        let chi = |x: &Word| antipode(&id(x));
                        if first_antipode { psi.map_each(chi, id) } else { psi.map_each(id, chi) }.multiply_out()
                    };
                    let expected = if n == 0 { Tensor::unit(&field, m) } else { Tensor::zero(&field, m, n) };
                    ensure!(conv(true) == expected && conv(false) == expected, "antipode identity fails on {w:?}");
                    checked += 1;
                }
            }
            // algebra-map property on all pairs of words with total length <= 6
            for i in 0..=6 {
                for j in 0..=(6 - i) {
                    for u in words(i, m) {
                        for v in words(j, m) {
                            let (tu, tv) = (word_tensor(&field, m, &u), word_tensor(&field, m, &v));
                            let lhs = coproduct(&concat(&tu, &tv).map_err(err)?);
                            ensure!(
                                lhs == coproduct(&tu).mul(&coproduct(&tv)),
                                "coproduct not multiplicative on {u:?}, {v:?}"
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} basis words over GF(2), GF(3), m <= 3, degree <= 6"))
}

fn criterion_2() -> Check {
    let mut checked = 0;
    for (p, e) in [(2u32, 2u32), (3, 1)] {
        let field = make_field(p, e).map_err(err)?;
        let zeta = if p == 2 { field.primitive_root(3).map_err(err)? } else { field.from_int(2) };
        let theta = NaturalTransform::theta(&field, zeta, 6).map_err(err)?;
        for m in 1..=3 {
            for n in 1..=6 {
                let op = theta.as_operator(n, m).map_err(err)?;
                let factor = field.sub(field.pow(zeta, n as u64), Scalar::ONE);
                for v in primitives(n, m, &field).map_err(err)?.basis_vecs() {
                    let mut expected = v.clone();
                    field.scale(&mut expected, factor.0);
                    ensure!(op.mul_vec(&field, &v) == expected, "theta eigenvalue fails at p={p} n={n} m={m}");
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} primitive basis vectors"))
}

/// Aperiodic necklaces counted by brute force: words strictly below all their rotations.
fn lyndon_count(n: usize, m: usize) -> u128 {
    words(n, m).into_iter().filter(|w| (1..n).all(|r| *w < [&w[r..], &w[..r]].concat())).count() as u128
}

fn criterion_3() -> Check {
    for p in [2u32, 3] {
        let field = make_field(p, 1).map_err(err)?;
        for n in 1..=6 {
            let (_, lie) = lie_module(n, &field).map_err(err)?;
            ensure!(lie.dim() == factorial(n - 1), "dim Lie({n}) = {} over GF({p})", lie.dim());
        }
        for n in 1..=8 {
            for m in 1..=3 {
                let d = lyndon_basis(n, m, &field).map_err(err)?.dim() as u128;
                ensure!(d == witt_dim(n as u64, m as u64), "lyndon basis ({n},{m}) has dim {d}");
                ensure!(d == lyndon_count(n, m), "witt({n},{m}) disagrees with the necklace count");
            }
        }
    }
    ensure!(witt_dim(12, 2) == 335 && lyndon_count(12, 2) == 335, "witt(12,2) != 335");
    ensure!(witt_dim(6, 2) == 9 && lyndon_count(6, 2) == 9, "witt(6,2) != 9");
    Ok("Lie(n) for n <= 6, Lyndon bases for n <= 8, m <= 3, witt(12,2) = 335, witt(6,2) = 9".into())
}

fn criterion_4() -> Check {
    let field = make_field(2, 1).map_err(err)?;
    let g_lie = gamma(&field, &lyndon_basis(2, 2, &field).map_err(err)?, &lyndon_basis(2, 1, &field).map_err(err)?, 2)
        .map_err(err)?;
    let g_res = gamma(
        &field,
        &restricted_lie_power(2, 2, &field).map_err(err)?,
        &restricted_lie_power(2, 1, &field).map_err(err)?,
        2,
    )
    .map_err(err)?;
    ensure!(g_lie.dim() == 1 && g_res.dim() == 1, "gamma dims {} and {}", g_lie.dim(), g_res.dim());
    ensure!(
        g_lie.ambient_span().map_err(err)? == g_res.ambient_span().map_err(err)?,
        "gamma_2(L_2) != gamma_2(Lres_2)"
    );
    ensure!(g_lie.actions()[0] == Matrix::identity(1), "gamma_2(L_2) is not trivial");
    let tog = tensor_over_group(&g_lie, LeftModule::TensorPower { m: 2 }).map_err(err)?.dim();
    ensure!(tog == 3, "tensor over the group has dim {tog}, expected dim S_2(V) = 3");
    let phi = phi_map(&g_lie, 2).map_err(err)?;
    let l2 = lyndon_basis(2, 2, &field).map_err(err)?;
    let res = restricted_lie_power(2, 2, &field).map_err(err)?;
    ensure!(phi.image == l2, "phi image is not L_2(V)");
    ensure!(res.contains_subspace(&field, &l2) && res.dim() > l2.dim(), "L_2(V) is not proper in Lres_2(V)");
    let mut tors = Vec::new();
    for m in 1..=3 {
        let t = tor1_dim(&g_lie, LeftModule::TensorPower { m }).map_err(err)?;
        ensure!(t > 0, "Tor_1 vanishes at m = {m}");
        tors.push(t);
    }
    Ok(format!(
        "gamma_2 trivial of dim 1; S_2(V) dim 3; phi image dim {} < {}; Tor_1 dims {tors:?}",
        l2.dim(),
        res.dim()
    ))
}

fn criterion_5() -> Outcome {
    let run = || -> std::result::Result<(bool, String), String> {
        let field = make_field(3, 1).map_err(err)?;
        let l3 = lyndon_basis(3, 2, &field).map_err(err)?;
        let source = evaluate(&FunctorSpec::parse(&field, "L(2)*T(1)").map_err(err)?, 2, &field).map_err(err)?;
        let map = bracket_operator(2, 1, 2, &field).map_err(err)?;
        let iso =
            equivariant_iso_check(source.component(3).ok_or("no degree 3")?, &l3, &map, 3, 2, &field).map_err(err)?;
        ensure!(iso, "L_2(V) (x) V -> L_3(V) is not an equivariant isomorphism");
        let (lie3, _) = lie_module(3, &field).map_err(err)?;
        let opts = DecompositionOptions::default();
        let (proj, _) = max_projective_summand(&lie3, opts).map_err(err)?;
        ensure!(proj.dim() == 0, "Lie(3) has a projective summand of dim {}", proj.dim());
        let check = functorial_tn_projective_check(&l3, 3, 2, &field).map_err(err)?;
        if check.holds {
            return Ok((true, "iso confirmed; functorial check true; max projective summand of Lie(3) is 0".into()));
        }
        ensure!(
            check.stable && check.lifting.is_some() && check.retraction.is_none(),
            "functorial check failed for an undocumented reason"
        );
        Ok((
            false,
            "iso confirmed; max projective summand of Lie(3) is 0; functorial check FALSE: \
             a lifting through the left-normed map exists but no equivariant retraction \
             T_3(V) -> L_3(V) does (dim V = 2 < 3); see the decisions ledger"
                .into(),
        ))
    };
    match run() {
        Ok((true, msg)) => Outcome { result: Ok(msg), known_conflict: false },
        Ok((false, msg)) => Outcome { result: Err(msg), known_conflict: true },
        Err(e) => Outcome { result: Err(e), known_conflict: false },
    }
}

fn criterion_6() -> Check {
    let mut checked = 0;
    for p in [2u32, 3] {
        let field = make_field(p, 1).map_err(err)?;
        for n in 1..=5 {
            let (lie, _) = lie_module(n, &field).map_err(err)?;
            for m in 1..=3 {
                let lhs = tensor_over_group(&lie, LeftModule::TensorPower { m }).map_err(err)?.dim();
                let tor = tor1_dim(&lie, LeftModule::TensorPower { m }).map_err(err)?;
                let ln = lyndon_basis(n, m, &field).map_err(err)?.dim();
                ensure!(lhs == tor + ln, "p={p} n={n} m={m}: {lhs} != {tor} + {ln}");
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} cases of dim(Lie(n) (x) V^n) = Tor_1 + dim L_n(V)"))
}

fn criterion_7() -> Check {
    let mut notes = Vec::new();
    for p in [2u32, 3] {
        let t = Instant::now();
        let report = block_decomposition(p, 6).map_err(err)?;
        ensure!(report.idempotents_exact, "p={p}: a stage idempotent is not exact");
        for d in &report.degrees {
            ensure!(d.consistent, "p={p}, n={}: verdicts {:?}", d.n, d.claims);
            let claimed: usize = d.claims.iter().map(|c| c.lie_dim).sum();
            ensure!(claimed == d.lie_dim, "p={p}, n={}: verdicts do not partition Lie(n)", d.n);
            let claimer = d.claims.iter().find(|c| c.lie_dim > 0).ok_or("no claiming block")?;
            ensure!(
                claimer.r.is_some(),
                "p={p}, n={}: claiming block {} does not divide n properly",
                d.n,
                claimer.block
            );
        }
        for e in &report.stage_idempotents {
            for n in 0..=5 {
                ensure!(
                    e.coalgebra_compatible_in_degree(n).map_err(err)?,
                    "p={p}: stage idempotent not coalgebra in degree {n}"
                );
            }
        }
        notes.push(format!("p={p}: blocks {:?}, {} stages in {:.1?}", report.blocks, report.stages.len(), t.elapsed()));
    }
    Ok(notes.join("; "))
}

fn criterion_8() -> Check {
    let f2 = make_field(2, 1).map_err(err)?;
    let r3 = splitness_check(&[3], 3, 3, &f2).map_err(err)?;
    ensure!(r3.verdict, "splitness of <L_3> at p = 2 is false");
    let r2 = splitness_check(&[2], 2, 2, &f2).map_err(err)?;
    ensure!(!r2.verdict && !r2.hypothesis_ok, "splitness of <L_2> at p = 2 not rejected");
    let r36 = splitness_check(&[3, 6], 6, 2, &f2).map_err(err)?;
    let oracle = witt_dim(6, 2) - witt_dim(2, witt_dim(3, 2) as u64);
    let q6 = r36.degrees.iter().find(|d| d.q == 6).and_then(|d| d.q_dim).ok_or("no Q_6 dimension")?;
    ensure!(r36.verdict, "splitness of <L_3, L_6> at p = 2 is false");
    ensure!(q6 as u128 == oracle && oracle == 8, "dim Q_6 = {q6}, oracle {oracle}");
    Ok(format!(
        "<L_3> split; <L_2> rejected ({}); <L_3,L_6> split with dim Q_6 = {q6}",
        r2.hypothesis_note.unwrap_or_default()
    ))
}

fn criterion_9() -> Check {
    let ms = MSet::Finite(vec![(3, Some(3))]);
    let dims = verify_theorem61(&ms, 2, 12, 2, Mode::Dims).map_err(err)?;
    let mut d: Vec<u128> = dims.summands.iter().map(|s| s.dim).collect();
    d.sort_unstable();
    ensure!(dims.holds && dims.lie_dim == 335 && d == [3, 28, 32, 272], "dimension mode: {:?}", dims.summands);
    let t = Instant::now();
    let explicit = verify_theorem61(&ms, 2, 12, 2, Mode::Explicit).map_err(err)?;
    let e = explicit.explicit.as_ref().ok_or("explicit check missing")?;
    ensure!(explicit.holds && e.independent && e.equals_lie_power && e.sum_dim == 335, "explicit mode: {e:?}");
    let cor = verify_theorem61(&MSet::AllCoprime, 2, 6, 2, Mode::Explicit).map_err(err)?;
    let mut c: Vec<u128> = cor.summands.iter().map(|s| s.dim).collect();
    c.sort_unstable();
    ensure!(cor.holds && c == [1, 8], "unbounded family at target 6: {:?}", cor.summands);
    let terms: Vec<String> = dims.summands.iter().map(|s| format!("{}={}", s.term, s.dim)).collect();
    Ok(format!("335 = {} (explicit direct sum in {:.1?}); 9 = 8 + 1", terms.join(" + "), t.elapsed()))
}

fn criterion_10() -> Check {
    for p in [2u32, 3] {
        let field = make_field(p, 1).map_err(err)?;
        for n in 1..=6 {
            for m in 1..=3 {
                let a = primitives(n, m, &field).map_err(err)?;
                let b = restricted_lie_power(n, m, &field).map_err(err)?;
                ensure!(a == b, "primitives != Lres at p={p} n={n} m={m}");
            }
        }
    }
    for k in 1..=3usize {
        let list = basic_products(&vec![1; k], 6).map_err(err)?;
        let mut counts: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
        for b in &list {
            *counts.entry(b.multiplicities.clone()).or_default() += 1;
        }
        // every multiplicity vector with total weight <= 6
        let mut vecs = vec![Vec::new()];
        for _ in 0..k {
            vecs = vecs
                .into_iter()
                .flat_map(|v: Vec<usize>| (0..=6).map(move |x| [v.clone(), vec![x]].concat()))
                .collect();
        }
        for v in vecs.into_iter().filter(|v| (1..=6).contains(&v.iter().sum::<usize>())) {
            let c = counts.get(&v).copied().unwrap_or(0);
            ensure!(c == multiplicity(&v), "{v:?}: {c} basic products vs formula {}", multiplicity(&v));
        }
    }
    let field = make_field(2, 1).map_err(err)?;
    for gens in [vec![1usize], vec![3], vec![3, 6], vec![2, 3], vec![2, 4, 5]] {
        let b = subhopf_evaluate(&gens, 8, 2, &field).map_err(err)?;
        let dims: Vec<u64> = (0..=8).map(|q| b.dim(q) as u64).collect();
        let d = hilbert_series_d_dims(&dims, 8).map_err(err)?;
        let mut again = vec![1u64; 9];
        for n in 1..=8 {
            again[n] = (1..=n).map(|i| d[i] * again[n - i]).sum();
        }
        ensure!(again == dims, "Hilbert round trip fails for {gens:?}");
    }
    Ok("primitives = Lres; basic-product counts = multiplicity formula; Hilbert round trips through degree 8".into())
}

fn criterion_11() -> Check {
    let f2 = make_field(2, 1).map_err(err)?;
    let report = || -> std::result::Result<String, String> {
        let block = serde_json::to_string(&block_decomposition(2, 5).map_err(err)?).map_err(err)?;
        let split = serde_json::to_string(&splitness_check(&[3, 6], 6, 2, &f2).map_err(err)?).map_err(err)?;
        let t11 = theorem_1_1_report(&MSet::Finite(vec![(3, Some(3))]), 12, 2, &f2).map_err(err)?;
        let t61 = verify_theorem61(&MSet::Finite(vec![(3, Some(3))]), 2, 12, 2, Mode::Dims).map_err(err)?;
        Ok(format!(
            "{block}\n{split}\n{}\n{}",
            serde_json::to_string(&t11).map_err(err)?,
            serde_json::to_string(&t61).map_err(err)?
        ))
    };
    let first = report()?;
    for run in 2..=3 {
        ensure!(report()? == first, "report bytes differ on run {run}");
    }
    let f3 = make_field(3, 1).map_err(err)?;
    let modules = vec![
        ("k(S_3) over GF(3)", SigmaModule::regular(&f3, 3, Side::Right).map_err(err)?),
        ("Lie(4) over GF(2)", lie_module(4, &f2).map_err(err)?.0),
        ("Lie(4) over GF(3)", lie_module(4, &f3).map_err(err)?.0),
        ("k(S_4) over GF(2)", SigmaModule::regular(&f2, 4, Side::Right).map_err(err)?),
    ];
    let mut sigs = Vec::new();
    for (name, module) in &modules {
        let mut seen = None;
        for seed in 0..10u64 {
            let opts = DecompositionOptions { seed, ..Default::default() };
            let sig =
                decomposition_signature(&indecomposable_decomposition(module, opts).map_err(err)?).map_err(err)?;
            match &seen {
                None => seen = Some(sig),
                Some(s) => ensure!(*s == sig, "{name}: signature differs for seed {seed}"),
            }
        }
        sigs.push(format!("{name}: {:?}", seen.unwrap()));
    }
    Ok(format!(
        "{} report bytes stable over 3 runs; signatures stable over 10 seeds ({})",
        first.len(),
        sigs.join("; ")
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "Hopf axioms", || criterion_1().into()),
        (2, "theta eigenvalues on primitives", || criterion_2().into()),
        (3, "Witt and Lie dimensions", || criterion_3().into()),
        (4, "gamma of the degree-2 Lie power at p = 2", || criterion_4().into()),
        (5, "degree-3 Lie power at p = 3 on two generators", criterion_5),
        (6, "Lie(n) tensor sequence exactness", || criterion_6().into()),
        (7, "block decomposition verdicts", || criterion_7().into()),
        (8, "splitness base cases", || criterion_8().into()),
        (9, "Lie-power decomposition over basic products", || criterion_9().into()),
        (10, "cross-oracle invariants", || criterion_10().into()),
        (11, "determinism", || criterion_11().into()),
    ];
    let mut unexpected = 0;
    for (id, title, run) in criteria {
        let t = Instant::now();
        let outcome = run();
        let elapsed = t.elapsed();
        match &outcome.result {
            Ok(detail) => println!("PASS criterion {id:>2} ({title}) [{elapsed:.1?}]: {detail}"),
            Err(detail) => {
                let tag = if outcome.known_conflict { " [documented conflict]" } else { "" };
                println!("FAIL criterion {id:>2} ({title}){tag} [{elapsed:.1?}]: {detail}");
                if !outcome.known_conflict {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
