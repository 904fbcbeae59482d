//! Acceptance suite: runs every criterion, prints one line each and exits
//! nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;

use qwalk_cli::commands;
use qwalk_cli::{CoinSource, Output, Partitions};
use qwalk_core::random::random_unitary;
use qwalk_core::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn real_matrix(rows: &[&[f64]]) -> ComplexMatrix {
    let data = rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
    let flat: Vec<f64> = data.concat();
    ComplexMatrix::from_real(rows.len(), rows[0].len(), &flat).unwrap()
}

fn ones(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_real(n, n, &vec![1.0; n * n]).unwrap()
}

/// Rightward cycle: `R[i][i+1] = 1`, so `Rᵀ e_k = e_{k+1}`.
fn right(n: usize) -> ComplexMatrix {
    ComplexMatrix::permutation(&(0..n).map(|i| (i + 1) % n).collect::<Vec<_>>()).unwrap()
}

fn cycle_graph(n: usize) -> MultiGraph {
    let mut g = MultiGraph::new(n).unwrap();
    for i in 0..n {
        g.add_undirected(UndirectedEdge::new(i, (i + 1) % n, c(1.0)))
            .unwrap();
    }
    g
}

fn complete_with_loops(n: usize) -> MultiGraph {
    let mut g = MultiGraph::new(n).unwrap();
    for i in 0..n {
        for j in 0..n {
            g.add_arc(Arc::new(i, j, c(1.0))).unwrap();
        }
    }
    g
}

fn cube_graph() -> MultiGraph {
    let mut g = MultiGraph::new(8).unwrap();
    for v in 0..8usize {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                g.add_undirected(UndirectedEdge::new(v, w, c(1.0))).unwrap();
            }
        }
    }
    g
}

/// Moving-shift walk on `C_n`: coin 0 steps right, coin 1 steps left.
fn cycle_shift(n: usize) -> ShiftOperator {
    let r = right(n);
    let grid = KrausGrid::diagonal(vec![r.transpose(), r]).unwrap();
    assemble_shift(grid, Tolerance::default()).unwrap()
}

fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    real_matrix(&[&[h, h], &[h, -h]])
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) {
    std::fs::write(path, serde_json::to_string(value).unwrap()).unwrap();
}

fn ac1() -> Outcome {
    let tol = Tolerance::default();
    let j4 = ones(4);
    let grid = decompose_permutations(&j4).map_err(|e| e.to_string())?;
    ensure(
        grid.block_sum() == j4.transpose(),
        "block sum differs from J4ᵀ",
    )?;
    for i in 0..grid.m() {
        ensure(
            grid.block(i, i).is_permutation(),
            format!("block {i} is not a permutation"),
        )?;
    }
    let shift = assemble_shift(grid, tol).map_err(|e| e.to_string())?;
    let residual = shift.matrix().unitarity_residual().unwrap();
    ensure(residual < 1e-12, format!("unitarity residual {residual:e}"))?;
    Ok(format!("m = {}, residual {residual:e}", shift.m()))
}

fn ac2() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst_pass = 0.0f64;
    let mut weakest_fail = f64::INFINITY;
    for trial in 0..20 {
        let u = random_unitary(12, &mut rng);
        for m in [1, 2, 3, 4, 6, 12] {
            let n = 12 / m;
            let grid = KrausGrid::from_matrix(&u, m).unwrap();
            // Expected adjacency by direct summation of the transposed blocks.
            let mut adjacency = ComplexMatrix::zeros(n, n);
            for r in 0..12 {
                for col in 0..12 {
                    adjacency[(col % n, r % n)] += u[(r, col)];
                }
            }
            let report = verify_kraus(&adjacency, &grid, tol).unwrap();
            ensure(
                report.passed(),
                format!("trial {trial}, m = {m}: unperturbed grid fails"),
            )?;
            worst_pass = worst_pass.max(report.column.residual.max(report.row.residual));

            // Push the largest entry of U outward by 1e-3.
            let (mut br, mut bc) = (0, 0);
            for r in 0..12 {
                for col in 0..12 {
                    if u[(r, col)].norm() > u[(br, bc)].norm() {
                        (br, bc) = (r, col);
                    }
                }
            }
            let b = u[(br, bc)];
            let mut perturbed = grid.clone();
            perturbed.block_mut(br / n, bc / n)[(br % n, bc % n)] += b / b.norm() * 1e-3;
            let report = verify_kraus(&adjacency, &perturbed, tol).unwrap();
            let residual = report.column.residual.max(report.row.residual);
            ensure(
                !report.complete(),
                format!("trial {trial}, m = {m}: perturbation undetected"),
            )?;
            ensure(
                residual >= 5e-4,
                format!("trial {trial}, m = {m}: perturbed residual {residual:e}"),
            )?;
            weakest_fail = weakest_fail.min(residual);
        }
    }
    Ok(format!(
        "max residual {worst_pass:e} unperturbed, min {weakest_fail:e} perturbed"
    ))
}

fn ac3() -> Outcome {
    let tol = Tolerance::default();
    let fixtures = [
        ("C4", cycle_graph(4)),
        ("C8", cycle_graph(8)),
        ("J4", complete_with_loops(4)),
        ("Q3", cube_graph()),
    ];
    let mut worst = 0.0f64;
    for (name, g) in fixtures {
        let a = g.adjacency();
        let perms = permutation_decomposition(&a).map_err(|e| format!("{name}: {e}"))?;
        let grid = decompose_permutations(&a).map_err(|e| format!("{name}: {e}"))?;
        let shift = assemble_shift(grid, tol).map_err(|e| format!("{name}: {e}"))?;
        let (_, back) = extract_graph(shift.matrix(), shift.m(), tol).map_err(|e| e.to_string())?;
        let diff = back.adjacency().max_abs_diff(&a).unwrap();
        ensure(
            diff <= 1e-12,
            format!("{name}: adjacency differs by {diff:e}"),
        )?;
        worst = worst.max(diff);
        let mut per_coin = vec![0usize; perms.len()];
        for arc in back.arcs() {
            let j = arc.coin_tag.ok_or(format!("{name}: untagged arc"))?;
            ensure(
                perms[j][arc.tail] == arc.head && arc.weight == c(1.0),
                format!("{name}: arc {}→{} tagged {j}", arc.tail, arc.head),
            )?;
            per_coin[j] += 1;
        }
        ensure(
            per_coin.iter().all(|&k| k == g.n()),
            format!("{name}: arcs per coin {per_coin:?}"),
        )?;
    }
    Ok(format!("C4, C8, J4, Q3 recovered, max diff {worst:e}"))
}

fn extract_via_cli(dir: &Path, name: &str, u: &ComplexMatrix, p: Partitions) -> Result<(), String> {
    let input = dir.join(format!("{name}.json"));
    write_json(&input, u);
    commands::extract(
        &input,
        p,
        &dir.join(format!("{name}.graph.json")),
        Tolerance::default(),
    )
    .map(drop)
    .map_err(|e| e.to_string())
}

fn ac4() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let read = |file: &str| -> ComplexMatrix { commands::read_json(&dir.join(file)).unwrap() };

    let swap = ComplexMatrix::permutation(&[0, 2, 1, 3]).unwrap();
    extract_via_cli(dir, "swap", &swap, Partitions::Single(2))?;
    ensure(
        read("swap.graph.adjacency.json") == ones(2),
        "SWAP4 does not give J2",
    )?;

    extract_via_cli(
        dir,
        "id",
        &ComplexMatrix::identity(4),
        Partitions::Single(2),
    )?;
    let two_i = ComplexMatrix::identity(2).scale(c(2.0));
    ensure(
        read("id.graph.adjacency.json") == two_i,
        "I4 does not give 2·I2",
    )?;

    let u = random_unitary(8, &mut StdRng::seed_from_u64(4));
    extract_via_cli(dir, "u", &u, Partitions::All)?;
    let mut worst = 0.0f64;
    for m in [1, 2, 4, 8] {
        let n = 8 / m;
        // Oracle: (Σ blocks of U)ᵀ, summed straight from the entries.
        let mut oracle = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for bi in 0..m {
            for bj in 0..m {
                for r in 0..n {
                    for col in 0..n {
                        oracle[col][r] += u[(bi * n + r, bj * n + col)];
                    }
                }
            }
        }
        let got = read(&format!("u.graph.m{m}.adjacency.json"));
        ensure(
            got.shape() == (n, n),
            format!("m = {m}: shape {:?}", got.shape()),
        )?;
        for (r, row) in oracle.iter().enumerate() {
            for (col, want) in row.iter().enumerate() {
                worst = worst.max((got[(r, col)] - want).norm());
            }
        }
        ensure(worst <= 1e-12, format!("m = {m}: differs by {worst:e}"))?;
    }
    Ok(format!(
        "SWAP4 → J2, I4 → 2·I2, random U max diff {worst:e}"
    ))
}

fn bits_equal(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
    a.shape() == b.shape()
        && a.entries()
            .iter()
            .zip(b.entries())
            .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits())
}

fn ac5() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = StdRng::seed_from_u64(5);
    for m in [2, 3, 4] {
        for n in [2, 3, 5] {
            let coin = random_unitary(m, &mut rng);
            let spec = CoinSpec::per_vertex(m, n, vec![coin.clone(); n], tol).unwrap();
            ensure(
                bits_equal(&coin_matrix(&spec), &coin.kron(&ComplexMatrix::identity(n))),
                format!("m = {m}, n = {n}: per-vertex differs from C ⊗ I"),
            )?;
        }
    }

    let shift = decompose_permutations(&cycle_graph(4).adjacency())
        .and_then(|g| assemble_shift(g, tol))
        .map_err(|e| e.to_string())?;
    let coin = random_unitary(2, &mut rng);
    let u = evolution(&shift, &CoinSpec::global(coin.clone(), 4, tol).unwrap()).unwrap();
    let s = shift.matrix();
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            for r in 0..4 {
                for col in 0..4 {
                    let want: Complex64 = (0..2)
                        .map(|k| coin[(k, j)] * s[(i * 4 + r, k * 4 + col)])
                        .sum();
                    worst = worst.max((u[(i * 4 + r, j * 4 + col)] - want).norm());
                }
            }
        }
    }
    ensure(worst <= 1e-12, format!("U-block formula off by {worst:e}"))?;
    Ok(format!(
        "per-vertex exact for 9 sizes, U-block diff {worst:e}"
    ))
}

fn ac6() -> Outcome {
    let tol = Tolerance::default();
    let shift = cycle_shift(4);
    let a = cycle_graph(4).adjacency();
    ensure(
        verify_kraus(&a, shift.grid(), tol).unwrap().passed(),
        "shift does not encode C4",
    )?;
    let u = evolution(&shift, &CoinSpec::global(hadamard(), 4, tol).unwrap()).unwrap();

    let rt = right(4).transpose();
    let lt = right(4);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expected = [
        rt.add(&lt).unwrap().scale(c(h)),
        rt.sub(&lt).unwrap().scale(c(h)),
    ];
    let mut worst = 0.0f64;
    for (j, want) in expected.iter().enumerate() {
        // Block column j read straight out of U.
        let mut direct = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for r in 0..4 {
                for col in 0..4 {
                    direct[(r, col)] += u[(i * 4 + r, j * 4 + col)];
                }
            }
        }
        let got = column_adjacency(&u, 2, j).unwrap();
        let diff = got
            .max_abs_diff(want)
            .unwrap()
            .max(direct.max_abs_diff(want).unwrap());
        ensure(diff <= 1e-12, format!("column {j} differs by {diff:e}"))?;
        worst = worst.max(diff);
    }
    let total = KrausGrid::from_matrix(&u, 2).unwrap().block_sum();
    let gap = total.max_abs_diff(&a.transpose()).unwrap();
    ensure(
        gap > 1e-3,
        format!("block sum of U matches Aᵀ (gap {gap:e})"),
    )?;
    Ok(format!(
        "column diff {worst:e}, block sum vs Aᵀ gap {gap:.3}"
    ))
}

fn ac7() -> Outcome {
    let tol = Tolerance::default();
    let u = evolution(
        &cycle_shift(8),
        &CoinSpec::global(hadamard(), 8, tol).unwrap(),
    )
    .unwrap();
    let s0 = WalkerState::basis(2, 8, 0, 0).unwrap();
    let states = evolve_trajectory(&u, &s0, 16).unwrap();
    let (mut amp_diff, mut prob_diff) = (0.0f64, 0.0f64);
    for (t, state) in states.iter().enumerate().skip(1) {
        let iterated = evolve(&u, &s0, t).unwrap();
        let powered = evolve_by_power(&u, &s0, t as u64).unwrap();
        for (x, y) in iterated.amplitudes().iter().zip(powered.amplitudes()) {
            amp_diff = amp_diff.max((x - y).norm());
        }
        ensure(
            iterated == *state,
            format!("t = {t}: trajectory differs from evolve"),
        )?;
        prob_diff = prob_diff.max((measure_position(state).total() - 1.0).abs());
    }
    ensure(
        amp_diff <= 1e-10,
        format!("iteration vs power {amp_diff:e}"),
    )?;
    ensure(
        prob_diff <= 1e-12,
        format!("probability sum off by {prob_diff:e}"),
    )?;
    Ok(format!(
        "amplitude diff {amp_diff:e}, probability drift {prob_diff:e}"
    ))
}

fn ac8() -> Outcome {
    let tol = Tolerance::default();
    let dir = tempfile::tempdir().unwrap();
    let p = |f: &str| dir.path().join(f);
    write_json(&p("shift.json"), cycle_shift(4).matrix());
    write_json(
        &p("s0.json"),
        &StateFile::from_state(&WalkerState::basis(2, 4, 0, 0).unwrap()),
    );
    // Coin 0 moves e_k to e_{k+1}: the deterministic walk with M = R.
    write_json(&p("r.json"), &right(4));
    write_json(
        &p("p0.json"),
        &DistributionFile {
            n: 4,
            probs: vec![1.0, 0.0, 0.0, 0.0],
        },
    );

    let steps = 12;
    let quantum = Output::File(p("walk.csv"));
    let classic = Output::File(p("classical.csv"));
    let identity = CoinSource::Named(NamedCoin::Identity);
    commands::walk(
        &p("shift.json"),
        Some(&identity),
        &p("s0.json"),
        steps,
        true,
        &quantum,
        tol,
    )
    .map_err(|e| e.to_string())?;
    commands::classical(&p("r.json"), &p("p0.json"), steps, true, &classic, tol)
        .map_err(|e| e.to_string())?;
    let a = std::fs::read(p("walk.csv")).unwrap();
    let b = std::fs::read(p("classical.csv")).unwrap();
    ensure(a == b, "walk and classical CSV differ")?;
    Ok(format!("{} identical bytes over {steps} steps", a.len()))
}

fn ac9() -> Outcome {
    let tol = Tolerance::default();
    let p0 = ProbabilityVector::basis(4, 0).unwrap();
    let skewed = ProbabilityVector::new(vec![0.1, 0.2, 0.3, 0.4], tol).unwrap();
    let mut worst = 0.0f64;
    for (name, a) in [("C4", cycle_graph(4).adjacency()), ("J4", ones(4))] {
        for start in [&p0, &skewed] {
            let traj = classical_trajectory(&a, start, 32).unwrap();
            for (t, it) in traj.iter().enumerate() {
                let pw = classical_walk_power(&a, start, t as u64).unwrap();
                ensure(
                    it.is_valid(tol) && pw.is_valid(tol),
                    format!("{name}, t = {t}: invalid"),
                )?;
                for (x, y) in it.probs().iter().zip(pw.probs()) {
                    worst = worst.max((x - y).abs());
                }
            }
            let direct = classical_walk(&a, start, 32).unwrap();
            ensure(
                direct == traj[32],
                format!("{name}: classical_walk differs from trajectory"),
            )?;
        }
    }
    ensure(worst <= 1e-12, format!("recurrence vs power {worst:e}"))?;
    Ok(format!("max diff {worst:e}"))
}

fn ac10() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = StdRng::seed_from_u64(10);
    let weight =
        |r: &mut StdRng| Complex64::new(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0));
    let mut worst = 0.0f64;
    let mut splits = 0;
    for trial in 0..50 {
        let n = rng.random_range(1..=8);
        let mut g = MultiGraph::new(n).unwrap();
        for _ in 0..rng.random_range(1..10) {
            let (t, h) = (rng.random_range(0..n), rng.random_range(0..n));
            g.add_arc(Arc::new(t, h, weight(&mut rng))).unwrap();
        }
        for _ in 0..rng.random_range(0..6) {
            let (u, v) = (rng.random_range(0..n), rng.random_range(0..n));
            g.add_undirected(UndirectedEdge::new(u, v, weight(&mut rng)))
                .unwrap();
        }
        let before = g.adjacency();
        for _ in 0..rng.random_range(1..8) {
            if !g.undirected().is_empty() && rng.random_bool(0.4) {
                let k = rng.random_range(0..g.undirected().len());
                g.split_edge(k).map_err(|e| e.to_string())?;
            } else {
                let k = rng.random_range(0..g.arcs().len());
                let w = g.arcs()[k].weight;
                let mut pieces: Vec<Complex64> = (0..rng.random_range(1..4))
                    .map(|_| weight(&mut rng))
                    .collect();
                let rest = w - pieces.iter().sum::<Complex64>();
                if rest.norm() == 0.0 {
                    continue;
                }
                pieces.push(rest);
                g.split_arc(k, &pieces, tol).map_err(|e| e.to_string())?;
            }
            splits += 1;
        }
        let diff = g.adjacency().max_abs_diff(&before).unwrap();
        ensure(
            diff <= 1e-12,
            format!("graph {trial}: adjacency moved by {diff:e}"),
        )?;
        worst = worst.max(diff);
    }
    Ok(format!(
        "{splits} splits over 50 graphs, max diff {worst:e}"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC-1", "J4 decomposes into a unitary shift", ac1),
        ("AC-2", "completeness of partitioned unitaries", ac2),
        ("AC-3", "graph → shift → graph roundtrip", ac3),
        ("AC-4", "extracting graphs from unitaries", ac4),
        ("AC-5", "coin operator structure", ac5),
        ("AC-6", "Hadamard coin mixes the cycle shift", ac6),
        ("AC-7", "Hadamard walk on C8", ac7),
        ("AC-8", "identity-coin walk equals deterministic walk", ac8),
        ("AC-9", "classical recurrence vs matrix power", ac9),
        ("AC-10", "edge splits preserve adjacency", ac10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, title, run) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {reason}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
