//! Probe: long-horizon relaxation at two box sizes — distance to the
//! moment-matched equilibrium, m4 trajectory, entropy monotonicity, and
//! clamped fraction at checkpoints.

use qkinetic::collision::{CollisionConfig, CollisionOperator, KernelTables};
use qkinetic::fields::{bose_relaxation_ic, fermi_relaxation_ic};
use qkinetic::grid::VelocityGrid;
use qkinetic::moments::{raw_moment, ConservedState};
use qkinetic::quantum::{quantum_maxwellian, solve_fugacity, Statistics};

fn clamped_fraction(f: &[f64], cap: Option<f64>) -> f64 {
    let mut clamped = 0.0;
    let mut total = 0.0;
    for &x in f {
        total += x.abs();
        if x < 0.0 {
            clamped += -x;
        }
        if let Some(c) = cap {
            if x > c {
                clamped += x - c;
            }
        }
    }
    clamped / total
}

fn dist_to_equilibrium(f: &[f64], grid: &VelocityGrid, statistics: Statistics, theta0: f64) -> f64 {
    let mac = ConservedState::from_field(f, grid).to_macro().unwrap();
    let thermo = solve_fugacity(mac.density, mac.internal_energy, theta0, statistics, None).unwrap();
    let mq = quantum_maxwellian(&thermo, mac.velocity, grid);
    let sup_m = mq.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    f.iter()
        .zip(&mq)
        .fold(0.0f64, |m, (&a, &b)| m.max((a - b).abs()))
        / sup_m
}

fn run(l: f64, statistics: Statistics, theta0: f64) {
    let grid = VelocityGrid::new(32, l).unwrap();
    let ic = match statistics {
        Statistics::Fermi => fermi_relaxation_ic(&grid),
        Statistics::Bose => bose_relaxation_ic(&grid, false),
    };
    let cap = match statistics {
        Statistics::Fermi => Some(1.0 / theta0),
        Statistics::Bose => None,
    };
    let cc = CollisionConfig::quantum(statistics, theta0).unwrap();
    let tables = KernelTables::build(&grid, 4, grid.max_truncation_radius()).unwrap();
    let mut op = CollisionOperator::new(&grid, tables);
    let dt = 1e-3;
    let mut f = ic;
    println!(
        "L={l} {statistics:?} R={:.3}: t=0 dist {:.3e} m4 {:.6e}",
        grid.max_truncation_radius(),
        dist_to_equilibrium(&f, &grid, statistics, theta0),
        raw_moment(&f, &grid, 4)
    );
    let checkpoints = [100, 250, 500, 1000, 1500, 2000];
    let mut next = 0;
    for step in 1..=2000 {
        let q = op.qq_full(&f, &cc);
        for (fv, qv) in f.iter_mut().zip(&q) {
            *fv += dt * qv;
        }
        if f.iter().any(|x| !x.is_finite()) {
            println!("  BLEW UP at step {step}");
            return;
        }
        if next < checkpoints.len() && step == checkpoints[next] {
            next += 1;
            println!(
                "  t={:.2}: dist {:.3e}  m4 {:.6e}  frac {:.3e}",
                step as f64 * dt,
                dist_to_equilibrium(&f, &grid, statistics, theta0),
                raw_moment(&f, &grid, 4),
                clamped_fraction(&f, cap),
            );
        }
    }
}

fn main() {
    run(8.0, Statistics::Fermi, 0.5);
    run(12.0, Statistics::Fermi, 0.5);
    run(8.0, Statistics::Bose, 0.5);
    run(12.0, Statistics::Bose, 0.5);
}
