//! Solver throughput on generated coverage instances.
//!
//! Oracles are rebuilt inside the timed closure so each measurement covers a
//! cold memo table, matching how the CLI runs a sweep cell.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use submax::instances::{generate, CoverageInstance, GeneratorParams};
use submax::solvers::{solve_em, solve_greedy, solve_sem, SolverConfig};
use submax::Oracle;

fn instance(n: usize) -> (CoverageInstance, f64) {
    let m = 2 * n;
    let inst = generate(&GeneratorParams::new(n, m, 7)).expect("valid sizes");
    (inst, (m as f64 * 0.6).round())
}

fn bench_solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solvers");
    for n in [50usize, 100, 200, 400] {
        let (inst, budget) = instance(n);
        let cfg = SolverConfig::new(budget);
        let cases: [(&str, fn(&Oracle, &Oracle, &SolverConfig) -> _); 3] = [
            ("em", solve_em),
            ("sem", solve_sem),
            ("greedy", solve_greedy),
        ];
        for (name, solve) in cases {
            group.bench_with_input(BenchmarkId::new(name, n), &inst, |b, inst| {
                b.iter(|| {
                    let g = inst.objective();
                    let f = inst.constraint();
                    solve(&g, &f, &cfg).expect("solver runs").g_value
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_solvers);
criterion_main!(benches);
