use lmi_core::driver::{low_rank_candidates, DegreeLedger, SolverConfig};
use lmi_core::pencil::{random_pencil, Pencil};
use lmi_core::qmatrix::QMatrix;
use lmi_core::rat::{parse_rat, Rat};
use lmi_core::seed::SeedStream;
use std::time::Instant;

fn probe_random(m: usize, n: usize, r: usize, seed: u64) {
    let stream = SeedStream::new(9000 + seed);
    let mut rng = stream.rng("probe", &[m as u64, n as u64, r as u64]);
    let pencil = random_pencil(&mut rng, m, n, 6);
    let config = SolverConfig {
        seed,
        skip_regularity: true,
        ..Default::default()
    };
    let mut ledger = DegreeLedger::default();
    let t = Instant::now();
    let solver_stream = SeedStream::new(config.seed);
    match low_rank_candidates(&pencil, r, &config, &solver_stream, &mut ledger) {
        Ok(param) => {
            println!(
                "(m={m}, n={n}, r={r})  total-degree={}  elapsed={:.2?}",
                param.degree(),
                t.elapsed()
            );
            for c in &ledger.charts {
                println!(
                    "  chart {:?} level {}: raw {} -> filtered {}",
                    c.chart, c.level, c.raw_degree, c.degree
                );
            }
            for l in &ledger.levels {
                println!("  level {} union degree {}", l.level, l.degree);
            }
        }
        Err(e) => println!("(m={m}, n={n}, r={r})  FAILED: {e}  elapsed={:.2?}", t.elapsed()),
    }
}

fn scheiderer_pencil() -> Pencil {
    let rows = [
        ["1", "0", "0", "0", "-3/2", "0"],
        ["0", "0", "1/2", "0", "-2", "0"],
        ["0", "1/2", "1", "0", "0", "0"],
        ["0", "0", "0", "2", "0", "1/2"],
        ["-3/2", "-2", "0", "0", "0", "1/2"],
        ["0", "0", "0", "1/2", "1/2", "1"],
    ];
    let parse_mat = |rows: &[[&str; 6]]| {
        QMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|s| parse_rat(s).unwrap()).collect::<Vec<Rat>>())
                .collect(),
        )
    };
    let a0 = parse_mat(&rows);
    let zero = vec![["0"; 6]; 6];
    let mut mats = vec![a0];
    let coords: [&[(usize, usize, &str)]; 6] = [
        &[(0, 2, "1"), (1, 1, "-2")],
        &[(0, 4, "-1"), (1, 3, "1")],
        &[(0, 5, "1"), (3, 3, "-2")],
        &[(1, 4, "-1"), (2, 3, "1")],
        &[(1, 5, "-1"), (3, 4, "1")],
        &[(2, 5, "1"), (4, 4, "-2")],
    ];
    for entries in coords {
        let mut rows6: Vec<Vec<Rat>> = zero
            .iter()
            .map(|row| row.iter().map(|s| parse_rat(s).unwrap()).collect())
            .collect();
        for &(i, j, v) in entries {
            let val = parse_rat(v).unwrap();
            rows6[i][j] = val.clone();
            if i != j {
                rows6[j][i] = val;
            }
        }
        mats.push(QMatrix::from_rows(rows6));
    }
    Pencil::new(6, 6, mats).unwrap()
}

fn probe_scheiderer() {
    use lmi_core::driver::{solve, Outcome};
    let pencil = scheiderer_pencil();
    let config = SolverConfig {
        seed: 1,
        skip_regularity: true,
        ..Default::default()
    };
    let t = Instant::now();
    match solve(&pencil, &config) {
        Ok(report) => {
            match &report.outcome {
                Outcome::Witness { rank, param, root_index } => {
                    println!(
                        "scheiderer: witness rank {rank} at root {root_index}, qn1 degree {}, elapsed {:.2?}",
                        param.degree(),
                        t.elapsed()
                    );
                    println!("  qn1 = {}", param.defining_poly());
                    let mut roots = param.real_roots();
                    println!("  {} real roots", roots.len());
                    for root in roots.iter_mut() {
                        let xs = param.approx_coords(root, 12);
                        let display: Vec<String> = xs
                            .iter()
                            .map(|v| lmi_core::rat::rat_to_decimal(v, 9))
                            .collect();
                        println!("  point ({})", display.join(", "));
                    }
                }
                other => println!("scheiderer: {:?} elapsed {:.2?}", other, t.elapsed()),
            }
        }
        Err(e) => println!("scheiderer FAILED: {e} elapsed {:.2?}", t.elapsed()),
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(String::as_str).unwrap_or("small");
    match which {
        "small" => {
            probe_random(3, 2, 2, 1);
            probe_random(3, 3, 2, 1);
        }
        "one" => {
            probe_random(3, 2, 2, 1);
            lmi_core::groebner::stats::dump();
        }
        "two" => {
            probe_random(3, 3, 2, 1);
            lmi_core::groebner::stats::dump();
        }
        "m4" => {
            probe_random(4, 3, 2, 1);
            probe_random(4, 3, 3, 1);
        }
        "m5" => {
            probe_random(5, 2, 4, 1);
        }
        "scheiderer" => probe_scheiderer(),
        other => eprintln!("unknown probe {other}"),
    }
}
