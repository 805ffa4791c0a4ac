//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{brute_stratified, brute_surjection, brute_tables, has_descending_chain};
use nam_core::catalog::{
    checks::nc_antecedent, preset, Comprehension, Extensionality, Families, NormalityCondition,
    SystemConfig,
};
use nam_core::experiment::{run_matrix, ExperimentSpec, RunOptions};
use nam_core::search::{
    consequence_check, decode_relation, enumerate_structures, find_models, relation_count,
    self_instantiation_probe, Constraints, Forced, ProbeOutcome, SearchOptions, Searcher, Target,
};
use nam_core::semantics::{
    complement_ext, predicates::mirimanoff, surjection_exists, ElemSet, Structure,
};
use nam_core::syntax::{enumerate_family, parse_formula, russell_body, stratified, FormulaFamily};

const LIMIT_PROBE: Duration = Duration::from_secs(1);
const LIMIT_RUSSELL_MODELS: Duration = Duration::from_secs(30);
const LIMIT_NC1_NC2: Duration = Duration::from_secs(120);
const LIMIT_PREDICATES: Duration = Duration::from_secs(60);
const LIMIT_CHAIN: Duration = Duration::from_secs(120);
const LIMIT_TRANSFORMS: Duration = Duration::from_secs(10);

type Check = Result<String, String>;

fn criterion(id: u32, title: &str, limit: Option<Duration>, body: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let slow = limit.is_some_and(|l| elapsed > l);
    let ok = result.is_ok() && !slow;
    let detail = match &result {
        Ok(d) | Err(d) => d.clone(),
    };
    let limit_text = limit.map_or("none".to_string(), |l| format!("{} s", l.as_secs()));
    println!(
        "{} [{id}] {title} ({:.3} s, limit {limit_text}){}: {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if slow { " TOO SLOW" } else { "" },
    );
    ok
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Structures with every relation on `n` elements and no Normal labels.
fn relations(n: usize) -> impl Iterator<Item = Structure> {
    (0..relation_count(n)).map(move |code| {
        Structure::from_extensions(decode_relation(n, code), ElemSet::EMPTY).unwrap()
    })
}

// 1 ------------------------------------------------------------------------

/// The four (t in t, N(t)) rows by hand, per variant.
fn truth_rows(variant: Comprehension) -> Vec<(bool, bool)> {
    let holds = |p: bool, n: bool| match variant {
        Comprehension::Naive => p == !p,
        Comprehension::RaBaDi => p == (!p || !n),
        Comprehension::RinoBaCo => p == (!p && n),
        Comprehension::NoBI => !n || p == !p,
        Comprehension::NoBE => n == (p == !p),
    };
    [(false, false), (false, true), (true, false), (true, true)]
        .into_iter()
        .filter(|&(p, n)| holds(p, n))
        .collect()
}

fn forced(values: impl Iterator<Item = bool> + Clone) -> Forced {
    if values.clone().all(|v| v) {
        Forced::True
    } else if values.clone().all(|v| !v) {
        Forced::False
    } else {
        Forced::Free
    }
}

fn probe_triad() -> Check {
    let ru = russell_body();
    let expected = [
        (Comprehension::Naive, None),
        (Comprehension::RaBaDi, Some((Forced::True, Forced::False))),
        (
            Comprehension::RinoBaCo,
            Some((Forced::False, Forced::False)),
        ),
        (Comprehension::NoBI, Some((Forced::Free, Forced::False))),
    ];
    let mut lines = Vec::new();
    for (variant, want) in expected {
        let rows = truth_rows(variant);
        let table = if rows.is_empty() {
            None
        } else {
            Some((
                forced(rows.iter().map(|r| r.0)),
                forced(rows.iter().map(|r| r.1)),
            ))
        };
        ensure(table == want, || {
            format!("{variant:?}: truth table gives {table:?}")
        })?;
        let probe = self_instantiation_probe(variant, &ru).map_err(|e| e.to_string())?;
        let got = match probe.outcome {
            ProbeOutcome::Contradiction => None,
            ProbeOutcome::Consistent => probe.membership.zip(probe.normal),
        };
        ensure(got == want, || format!("{variant:?}: probe says {probe}"))?;
        lines.push(format!("{} {}", variant.name(), probe.outcome));
    }
    Ok(lines.join("; "))
}

// 2 ------------------------------------------------------------------------

fn russell_models() -> Check {
    let cfg = SystemConfig {
        comprehension: Comprehension::RaBaDi,
        extensionality: Extensionality::Ee,
        ..SystemConfig::default()
    };
    let family = Families::with_unary(&cfg, FormulaFamily::from_members(vec![russell_body()]))
        .map_err(|e| e.to_string())?;
    let searcher = Searcher::with_families(&cfg, family.clone()).map_err(|e| e.to_string())?;
    let mut summary = Vec::new();
    for n in 1..=3 {
        let verdict = searcher
            .run(
                n,
                &SearchOptions {
                    witness_cap: None,
                    ..SearchOptions::default()
                },
            )
            .map_err(|e| e.to_string())?;
        let found: BTreeSet<String> = verdict
            .witnesses
            .into_iter()
            .map(|mut w| {
                w.denotations.clear();
                w.to_string()
            })
            .collect();
        let mut brute = BTreeSet::new();
        let mut denotations = 0;
        for s in enumerate_structures(n, &Constraints::default()).map_err(|e| e.to_string())? {
            let tables = brute_tables(&cfg, &family, &s);
            if tables.is_empty() {
                continue;
            }
            brute.insert(s.to_string());
            for t in tables {
                let (_, d) = t.denotations.iter().next().ok_or("empty table")?;
                denotations += 1;
                ensure(!s.is_normal(d) && s.extension(d) == s.universe(), || {
                    format!("n={n}: ru denoted by {d} in {s}")
                })?;
            }
        }
        ensure(found == brute, || {
            format!("n={n}: search and table enumeration disagree")
        })?;
        ensure(!found.is_empty(), || format!("n={n}: no models"))?;
        summary.push(format!(
            "n={n} {} models, {denotations} denotations",
            found.len()
        ));
    }
    Ok(summary.join("; "))
}

// 3 ------------------------------------------------------------------------

fn nc1_nc2() -> Check {
    let cfg = SystemConfig::default();
    let (mut compared, mut divergent) = (0u64, 0u64);
    for n in 1..=4 {
        for s in relations(n) {
            for e in s.elements() {
                let one = nc_antecedent(&s, &cfg, 1, e);
                let two = nc_antecedent(&s, &cfg, 2, e);
                if complement_ext(&s, e).is_empty() {
                    if one != two {
                        divergent += 1;
                    }
                    continue;
                }
                compared += 1;
                ensure(one == two, || {
                    format!("NC1 {one} vs NC2 {two} at {e} in {s}")
                })?;
            }
        }
    }
    Ok(format!(
        "{compared} elements agree; {divergent} divergences, all at empty complement"
    ))
}

// 4 ------------------------------------------------------------------------

fn predicate_oracles() -> Check {
    let mut checked = 0u64;
    for n in 1..=3 {
        for s in relations(n) {
            for e in s.elements() {
                ensure(
                    mirimanoff(&s, e) == !has_descending_chain(&s, e, n + 1),
                    || format!("mirimanoff at {e} in {s}"),
                )?;
                checked += 1;
            }
        }
    }
    let small: Vec<ElemSet> = (0u64..256).map(ElemSet).filter(|a| a.len() <= 4).collect();
    let mut pairs = 0u64;
    for &a in &small {
        for &b in &small {
            let la: Vec<usize> = a.iter().collect();
            let lb: Vec<usize> = b.iter().collect();
            ensure(
                surjection_exists(a, b) == brute_surjection(&la, &lb),
                || format!("surjection {a:?} onto {b:?}"),
            )?;
            pairs += 1;
        }
    }
    Ok(format!(
        "{checked} mirimanoff elements, {pairs} surjection pairs"
    ))
}

// 5 ------------------------------------------------------------------------

fn antecedent_chain() -> Check {
    let cfg = SystemConfig::default();
    let mut checked = 0u64;
    for n in 1..=4 {
        for s in relations(n) {
            for e in s.elements() {
                let (nine, ten, eleven) = (
                    nc_antecedent(&s, &cfg, 9, e),
                    nc_antecedent(&s, &cfg, 10, e),
                    nc_antecedent(&s, &cfg, 11, e),
                );
                ensure((!eleven || ten) && (!ten || nine), || {
                    format!("NC11 {eleven} NC10 {ten} NC9 {nine} at {e} in {s}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} elements"))
}

// 6 ------------------------------------------------------------------------

fn bare_models(
    cfg: &SystemConfig,
    n: usize,
) -> Result<(u64, BTreeSet<String>, Vec<String>), String> {
    let v = find_models(
        cfg,
        n,
        &SearchOptions {
            witness_cap: None,
            ..SearchOptions::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let bare = v
        .witnesses
        .into_iter()
        .map(|mut s| {
            s.designations = Default::default();
            s.to_string()
        })
        .collect();
    Ok((v.model_count, bare, v.not_evaluated))
}

fn monotonicity() -> Check {
    let nam0a = preset("NAM0a").ok_or("no NAM0a")?;
    let nc1 = SystemConfig {
        name: None,
        nc: NormalityCondition::Numbered(1),
        ..nam0a.clone()
    };
    let nam1a = preset("NAM1a").ok_or("no NAM1a")?;
    let chain = [nam0a, nc1, nam1a];
    for c in &chain {
        ensure(c.family_depth == 1, || {
            format!("{} depth {}", c.label(), c.family_depth)
        })?;
    }
    let mut rows = Vec::new();
    for n in 1..=3 {
        let mut counts = Vec::new();
        let mut previous: Option<BTreeSet<String>> = None;
        for cfg in &chain {
            let (count, bare, skipped) = bare_models(cfg, n)?;
            for name in ["BA4c", "FA1"] {
                ensure(skipped.iter().any(|s| s == name), || {
                    format!("{} does not report {name} as not evaluated", cfg.label())
                })?;
            }
            if let Some(prev) = &previous {
                ensure(bare.is_subset(prev), || {
                    format!("n={n}: {} has a model outside its predecessor", cfg.label())
                })?;
            }
            previous = Some(bare);
            counts.push(count);
        }
        ensure(counts.windows(2).all(|w| w[1] <= w[0]), || {
            format!("n={n}: {counts:?}")
        })?;
        rows.push(format!(
            "n={n} {}",
            counts
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(" >= ")
        ));
    }
    Ok(rows.join("; "))
}

// 7 ------------------------------------------------------------------------

fn ea2_consequence() -> Check {
    let cfg = SystemConfig {
        comprehension: Comprehension::RaBaDi,
        extensionality: Extensionality::Ee,
        family_depth: 1,
        ..SystemConfig::default()
    };
    let target: Target = "EA2"
        .parse()
        .map_err(|e: nam_core::search::SearchError| e.to_string())?;
    let mut rows = Vec::new();
    for n in 1..=3 {
        let r = consequence_check(&cfg, n, &target, &SearchOptions::default())
            .map_err(|e| e.to_string())?;
        ensure(r.holds && !r.vacuous, || r.to_string())?;
        rows.push(r.to_string());
    }
    Ok(rows.join("; "))
}

// 8 ------------------------------------------------------------------------

fn transforms() -> Check {
    let members = enumerate_family(2, false)
        .map_err(|e| e.to_string())?
        .members;
    for f in &members {
        ensure(f.supplement().supplement() == *f, || {
            format!("supplement on {f}")
        })?;
        ensure(f.dualize().dualize() == *f, || format!("dualize on {f}"))?;
        ensure(stratified(f) == brute_stratified(f), || {
            format!("stratified on {f}")
        })?;
    }
    for (text, want) in [("x in x", false), ("E y. x in y", true)] {
        let f = parse_formula(text).map_err(|e| e.to_string())?;
        ensure(
            stratified(&f) == want && brute_stratified(&f) == want,
            || format!("stratified({text}) should be {want}"),
        )?;
    }
    Ok(format!("{} family members", members.len()))
}

// 9 ------------------------------------------------------------------------

const MATRIX: &str = r#"{
    "experiments": [
        {"config": "NAM1a", "sizes": [1, 2, 3],
         "probes": [{"kind": "russell", "variant": "raBaDi"}, {"kind": "pathology"}],
         "consequenceTargets": ["EA2", "NC2", "false"]},
        {"config": "NAM0b", "sizes": [2, 3], "familyDepth": 0},
        {"config": {"comprehension": "noBI", "nc": "stratified", "eventualities": ["EA9"]},
         "sizes": [2], "familyDepth": 1}
    ]
}"#;

fn determinism() -> Check {
    let spec = ExperimentSpec::from_json(MATRIX).map_err(|e| e.to_string())?;
    let run = |workers| {
        run_matrix(
            &spec,
            &RunOptions {
                workers,
                timings: false,
            },
        )
        .map(|r| r.to_json())
        .map_err(|e| e.to_string())
    };
    let first = run(1)?;
    for workers in [1, 2, 4, 7] {
        ensure(run(workers)? == first, || {
            format!("report differs with {workers} workers")
        })?;
    }
    Ok(format!("{} byte report stable over 5 runs", first.len()))
}

fn main() -> ExitCode {
    let results = [
        criterion(1, "Russell probe triad", Some(LIMIT_PROBE), probe_triad),
        criterion(
            2,
            "Russell denotation in every model",
            Some(LIMIT_RUSSELL_MODELS),
            russell_models,
        ),
        criterion(
            3,
            "NC1/NC2 antecedent agreement",
            Some(LIMIT_NC1_NC2),
            nc1_nc2,
        ),
        criterion(
            4,
            "predicate oracles",
            Some(LIMIT_PREDICATES),
            predicate_oracles,
        ),
        criterion(
            5,
            "NC11 => NC10 => NC9",
            Some(LIMIT_CHAIN),
            antecedent_chain,
        ),
        criterion(6, "restriction monotonicity", None, monotonicity),
        criterion(7, "EA2 finite consequence", None, ea2_consequence),
        criterion(
            8,
            "involutions and stratification",
            Some(LIMIT_TRANSFORMS),
            transforms,
        ),
        criterion(9, "determinism", None, determinism),
    ];
    let passed = results.iter().filter(|ok| **ok).count();
    println!("{passed}/{} criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
