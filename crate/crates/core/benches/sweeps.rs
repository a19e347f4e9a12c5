use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use flatlewis::algebra::{check_lhae_laws, complex_algebra};
use flatlewis::correspondence::{collapse_checks, condition_for, correspondence_harness, Sweep};
use flatlewis::kripke::{enumerate_up_to, validates, FrameClass};
use flatlewis::proof::NamedAxiom;
use flatlewis::Exec;

const MODES: [Exec; 2] = [Exec::Sequential, Exec::Parallel];

fn correspondence(c: &mut Criterion) {
    let mut g = c.benchmark_group("correspondence");
    g.sample_size(10);
    let cond = condition_for(NamedAxiom::FourA, FrameClass::Flat).unwrap();
    for exec in MODES {
        g.bench_with_input(
            BenchmarkId::new("4a-flat-4-worlds", format!("{exec:?}")),
            &exec,
            |b, &exec| {
                let sweep = Sweep::new(cond.class, 4).with_samples(500).with_exec(exec);
                b.iter(|| black_box(correspondence_harness(cond, &sweep)))
            },
        );
    }
    g.finish();
}

fn validity(c: &mut Criterion) {
    let mut g = c.benchmark_group("validity");
    g.sample_size(10);
    let frames = enumerate_up_to(3, FrameClass::Flat);
    let di = NamedAxiom::Di.formula();
    for exec in MODES {
        g.bench_with_input(
            BenchmarkId::new("di-flat-3-worlds", format!("{exec:?}")),
            &exec,
            |b, &exec| b.iter(|| black_box(exec.filter(&frames, |f| validates(f, &di)).len())),
        );
        g.bench_with_input(
            BenchmarkId::new("laws-flat-3-worlds", format!("{exec:?}")),
            &exec,
            |b, &exec| {
                b.iter(|| {
                    black_box(
                        exec.filter(&frames, |f| check_lhae_laws(&complex_algebra(f)).flat_laws_hold())
                            .len(),
                    )
                })
            },
        );
    }
    g.finish();
}

fn collapse(c: &mut Criterion) {
    let mut g = c.benchmark_group("collapse");
    g.sample_size(10);
    for exec in MODES {
        g.bench_with_input(
            BenchmarkId::new("upward-flat-3-worlds", format!("{exec:?}")),
            &exec,
            |b, &exec| b.iter(|| black_box(collapse_checks(3, exec))),
        );
    }
    g.finish();
}

criterion_group!(benches, correspondence, validity, collapse);
criterion_main!(benches);
