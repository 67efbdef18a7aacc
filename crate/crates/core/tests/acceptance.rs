//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the summary lines are always shown.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use casoratia::casoratian::IndexSet;
use casoratia::arith::rat;
use casoratia::families::{FamilyName, FamilySpec};
use casoratia::report::{serialize_report, Format};
use casoratia::verify::*;
use casoratia::{Kind, QBase};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DRAWS: u64 = 5;
const SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Tally {
    reports: Vec<VerificationReport>,
    errors: Vec<String>,
}

impl Tally {
    fn count(&self, v: Verdict) -> usize {
        self.reports.iter().filter(|r| r.verdict == v).count()
    }

    fn all_pass(&self) -> bool {
        self.errors.is_empty() && self.reports.iter().all(|r| r.verdict == Verdict::Pass)
    }

    fn summary(&self) -> String {
        let mut s = format!(
            "{} reports, {} pass, {} fail, {} degenerate, {} errors",
            self.reports.len() + self.errors.len(),
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Degenerate),
            self.errors.len()
        );
        if let Some(r) = self.reports.iter().find(|r| r.verdict != Verdict::Pass) {
            s += &format!(
                "; first: {} {} D={:?} N={:?} {:?}",
                r.check_id, r.family, r.dset, r.n_top, r.witness
            );
        }
        if let Some(e) = self.errors.first() {
            s += &format!("; first error: {e}");
        }
        s
    }

    fn extend(&mut self, other: Tally) {
        self.reports.extend(other.reports);
        self.errors.extend(other.errors);
    }
}

fn run(opts: &Options, jobs: &[Job]) -> Tally {
    let mut t = Tally::default();
    for (job, r) in jobs.iter().zip(run_batch(opts, jobs, None)) {
        match r {
            Ok(r) => t.reports.push(r),
            Err(e) => t.errors.push(format!("{} {:?}: {e}", job.family, job.check)),
        }
    }
    t
}

fn seeded(family: FamilyName, check: Check) -> impl Iterator<Item = Job> {
    (0..DRAWS).map(move |k| Job {
        family,
        check: check.clone(),
        seed: SEED + k,
    })
}

fn families() -> impl Iterator<Item = FamilyName> {
    FamilySpec::all().iter().map(|s| s.name)
}

fn grid_sets() -> Vec<IndexSet> {
    (1u32..32)
        .filter(|m| m.count_ones() <= 3)
        .map(|m| IndexSet::new((0..5).filter(|k| m & (1 << k) != 0).collect()).unwrap())
        .collect()
}

fn grid_jobs(make: impl Fn(&IndexSet, usize) -> Vec<Check>) -> Vec<Job> {
    let mut jobs = Vec::new();
    for family in families() {
        for d in grid_sets() {
            let m = d.largest().unwrap();
            for n_top in m..=m + 2 {
                for check in make(&d, n_top) {
                    jobs.extend(seeded(family, check));
                }
            }
        }
    }
    jobs
}

fn calculus_suite() -> Outcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    for kind in [Kind::Additive, Kind::Multiplicative] {
        for t in common::fixed_tuples(kind, 200) {
            cases += 1;
            for (name, check) in common::CALCULUS_CHECKS {
                if let Err(e) = check(&t) {
                    failures.push(format!("{kind:?} {name}: {e}"));
                }
            }
        }
    }
    for spec in FamilySpec::all() {
        for (n, d) in [(1, 2), (2, 3), (3, 5), (3, 4), (5, 7)] {
            let qb = QBase::new(rat(n, d)).unwrap();
            let qb = spec.is_multiplicative().then_some(&qb);
            if let Err(e) = common::check_phi_laws(spec, qb, 6) {
                failures.push(e);
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{cases} tuples x {} identities, phi laws for M <= 6; {} failures{}",
            common::CALCULUS_CHECKS.len(),
            failures.len(),
            failures.first().map(|f| format!(": {f}")).unwrap_or_default()
        ),
    }
}

fn family_certification() -> Outcome {
    let mut jobs = Vec::new();
    for f in families() {
        jobs.extend(seeded(f, Check::DifferenceEq { n_max: 8, v_max: 6 }));
        jobs.extend(seeded(f, Check::ShiftRelations { n_max: 8 }));
    }
    let t = run(&Options::default(), &jobs);
    Outcome {
        pass: t.all_pass(),
        detail: t.summary(),
    }
}

fn twist_suite() -> Outcome {
    let mut jobs = Vec::new();
    for f in families() {
        jobs.extend(seeded(f, Check::TwistRelations));
        jobs.extend(seeded(f, Check::EnergyReflection { v_max: 8 }));
    }
    let t = run(&Options::default(), &jobs);
    let mutated = Options {
        mutation: Some(Mutation::Alpha),
        timings: false,
    };
    let mut undetected = Vec::new();
    for f in families() {
        let own: Vec<Job> = jobs.iter().filter(|j| j.family == f).cloned().collect();
        let m = run(&mutated, &own);
        if m.count(Verdict::Fail) == 0 {
            undetected.push(f.to_string());
        }
    }
    Outcome {
        pass: t.all_pass() && undetected.is_empty(),
        detail: format!(
            "{}; alpha mutation undetected in {} families{}",
            t.summary(),
            undetected.len(),
            if undetected.is_empty() {
                String::new()
            } else {
                format!(" ({})", undetected.join(","))
            }
        ),
    }
}

fn main_identity(tally: &mut Tally) -> Outcome {
    let jobs = grid_jobs(|d, n_top| {
        vec![Check::MainIdentity {
            dset: d.clone(),
            n_top,
        }]
    });
    let t = run(&Options::default(), &jobs);
    let out = Outcome {
        pass: t.all_pass(),
        detail: t.summary(),
    };
    tally.extend(t);
    out
}

fn duality(tally: &mut Tally) -> Outcome {
    let jobs = grid_jobs(|d, n_top| {
        vec![
            Check::Poldual {
                dset: d.clone(),
                n_top,
                n_max: 2,
            },
            Check::PotentialDuality {
                dset: d.clone(),
                n_top,
            },
        ]
    });
    let mut t = run(&Options::default(), &jobs);
    let mut pseudo = Vec::new();
    for f in families() {
        for v in 0..=3 {
            for n_top in v..=5 {
                pseudo.extend(seeded(f, Check::PseudoDiffeqDual { v, n_top }));
            }
        }
    }
    t.extend(run(&Options::default(), &pseudo));
    let out = Outcome {
        pass: t.all_pass(),
        detail: t.summary(),
    };
    tally.extend(t);
    out
}

fn shape_reduction(tally: &mut Tally) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut jobs = Vec::new();
    for f in families() {
        for n in 0..=5 {
            jobs.extend(seeded(f, Check::ConsecutiveConstant { n }));
        }
        for k in 0..10 {
            let mut pool: Vec<usize> = (1..=5).collect();
            pool.shuffle(&mut rng);
            let size = 1 + (k % 3);
            let dset = IndexSet::new(pool[..size].to_vec()).unwrap();
            jobs.push(Job {
                family: f,
                check: Check::ShapeReduction { dset },
                seed: SEED + k as u64,
            });
        }
    }
    let t = run(&Options::default(), &jobs);
    let out = Outcome {
        pass: t.all_pass(),
        detail: t.summary(),
    };
    tally.extend(t);
    out
}

fn awqi() -> Outcome {
    let mut jobs = Vec::new();
    for f in [FamilyName::AW, FamilyName::CqJ] {
        jobs.extend(seeded(f, Check::Awqi { n_max: 5 }));
    }
    let t = run(&Options::default(), &jobs);
    Outcome {
        pass: t.all_pass(),
        detail: t.summary(),
    }
}

fn degree_laws(tally: &Tally) -> Outcome {
    let with_degree: Vec<&VerificationReport> = tally
        .reports
        .iter()
        .filter(|r| r.expected_degree.is_some())
        .collect();
    let first = with_degree.iter().filter(|r| r.attempts == 1).count();
    let resampled = with_degree.len() - first;
    let unresolved = with_degree
        .iter()
        .filter(|r| r.verdict == Verdict::Degenerate)
        .count();
    let share = first as f64 / with_degree.len().max(1) as f64;
    Outcome {
        pass: !with_degree.is_empty() && share >= 0.95 && unresolved == 0,
        detail: format!(
            "{} reports with a degree law; {first} generic on the first draw ({:.2}%), {resampled} resampled, {unresolved} still degenerate",
            with_degree.len(),
            share * 100.0
        ),
    }
}

fn determinism() -> Outcome {
    let cfg = BatchConfig::default();
    let names: Vec<FamilyName> = families().collect();
    let jobs = cfg.jobs(&names, SEED, 2).unwrap();
    let render = |jobs: &[Job]| -> String {
        run_batch(&Options::default(), jobs, None)
            .into_iter()
            .map(|r| serialize_report(&r.unwrap(), Format::Json) + "\n")
            .collect()
    };
    let a = render(&jobs);
    let b = render(&jobs);
    let mut reversed = jobs.clone();
    reversed.reverse();
    let mut c: Vec<String> = render(&reversed).lines().map(str::to_string).collect();
    c.reverse();
    let c = c.join("\n") + "\n";
    let identical = a == b && a == c;

    let mut oracle = Vec::new();
    for f in families() {
        for d in grid_sets().into_iter().filter(|d| d.len() <= 2) {
            let m = d.largest().unwrap();
            for n_top in m..=m + 2 {
                oracle.extend(seeded(
                    f,
                    Check::DetOracle {
                        dset: d.clone(),
                        n_top,
                    },
                ));
            }
        }
        oracle.extend(seeded(
            f,
            Check::DetOracle {
                dset: IndexSet::empty(),
                n_top: 0,
            },
        ));
    }
    let t = run(&Options::default(), &oracle);
    Outcome {
        pass: identical && t.all_pass(),
        detail: format!(
            "{} JSON lines {}; oracle: {}",
            jobs.len(),
            if identical { "byte-identical across runs and orders" } else { "DIFFER" },
            t.summary()
        ),
    }
}

fn main() -> ExitCode {
    let mut tally = Tally::default();
    let mut all = true;
    let mut report = |n: usize, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        all &= o.pass;
        println!(
            "criterion {n}: {} ({:.1}s) {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    };
    report(1, &mut calculus_suite);
    report(2, &mut family_certification);
    report(3, &mut twist_suite);
    report(4, &mut || main_identity(&mut tally));
    report(5, &mut || duality(&mut tally));
    report(6, &mut || shape_reduction(&mut tally));
    report(7, &mut awqi);
    report(8, &mut || degree_laws(&tally));
    report(9, &mut determinism);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
