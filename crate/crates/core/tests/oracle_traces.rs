use galesolve::game::{Condition, Side, WinLoseGame};
use galesolve::oracles::{
    closed_choice_cantor, instrumented_solvers, lpo, Answer, Instance, OracleKind, OracleTrace, Pipeline,
    PresentedStream, PresentedTree, Problem, RunOptions, Value,
};
use galesolve::random;
use galesolve::winlose::{solve, solve_weak_staged, Realized};
use rand::Rng;

fn solver(p: Problem) -> galesolve::oracles::InstrumentedSolver {
    *instrumented_solvers().iter().find(|s| s.problem == p).unwrap()
}

fn safety_game(rng: &mut random::Rng64) -> WinLoseGame {
    let n = rng.gen_range(1..=7);
    let arena = random::arena(rng, n, 2, 2);
    let chain = random::chain(rng, arena.vertex_count(), 1);
    WinLoseGame::new(arena, Condition::Chain { chain, complemented: true }).unwrap()
}

#[test]
fn lpo_agrees_with_a_scan() {
    let mut rng = random::rng(40);
    for _ in 0..40 {
        let len = rng.gen_range(0..8);
        let s = PresentedStream { prefix: (0..len).map(|_| rng.gen_bool(0.15)).collect(), tail: rng.gen_bool(0.2) };
        let scan = (0..len + 1).all(|i| !s.bit(i));
        assert_eq!(lpo(&s, &mut OracleTrace::new()), scan);
    }
}

#[test]
fn closed_choice_avoids_removed_words() {
    let mut rng = random::rng(41);
    for _ in 0..30 {
        let removed: Vec<Vec<bool>> =
            (0..10).map(|_| (0..rng.gen_range(1..6)).map(|_| rng.gen_bool(0.3)).collect()).collect();
        let tree = PresentedTree { removed, nonempty: true };
        match closed_choice_cantor(&tree, &mut OracleTrace::new()) {
            Ok(p) => {
                for w in &tree.removed {
                    assert!((0..w.len()).any(|i| p.bit(i) != w[i]), "{w:?} is a prefix of the point");
                }
            }
            // Empty survivor set: every word of the longest removed length
            // must have a removed prefix.
            Err(_) => {
                let depth = tree.removed.iter().map(Vec::len).max().unwrap();
                for code in 0..1u32 << depth {
                    let w: Vec<bool> = (0..depth).map(|i| code >> i & 1 == 1).collect();
                    assert!(tree.removed.iter().any(|r| w.starts_with(r)));
                }
            }
        }
    }
}

#[test]
fn win_and_det_on_safety_games() {
    for seed in 0..40u64 {
        let mut rng = random::rng(random::split_seed(42, seed));
        let game = safety_game(&mut rng);
        for p in [Problem::Win, Problem::Det] {
            let s = solver(p);
            let mut trace = OracleTrace::new();
            let got = s.run(Instance::WinLose(&game), RunOptions::default(), &mut trace).unwrap();
            assert_eq!(got, s.direct(Instance::WinLose(&game)).unwrap(), "{p} seed {seed}");
            s.check_shape(&trace, 2).unwrap();
        }
    }
}

#[test]
fn det_d2_traces() {
    let mut seen_batch = 0;
    for seed in 0..40u64 {
        let mut rng = random::rng(random::split_seed(43, seed));
        let n = rng.gen_range(2..=7);
        let game = random::chain_game(&mut rng, n, 2);
        let s = solver(Problem::DetD2);
        let mut trace = OracleTrace::new();
        let got = s.run(Instance::WinLose(&game), RunOptions::default(), &mut trace).unwrap();
        assert_eq!(got, s.direct(Instance::WinLose(&game)).unwrap(), "seed {seed}");
        s.check_shape(&trace, 2).unwrap();
        seen_batch += usize::from(trace.count(OracleKind::Lpo) > 0);
    }
    assert!(seen_batch > 10);
}

#[test]
fn level_bounds_are_enforced() {
    let mut rng = random::rng(44);
    let game = random::chain_game(&mut rng, 5, 3);
    let mut t = OracleTrace::new();
    assert!(solver(Problem::DetD2).run(Instance::WinLose(&game), RunOptions::default(), &mut t).is_err());
    assert!(solver(Problem::NeAp).run(Instance::WinLose(&game), RunOptions::default(), &mut t).is_err());
}

#[test]
fn ne_ap_and_spe_match_direct_solvers() {
    for seed in 0..40u64 {
        let mut rng = random::rng(random::split_seed(45, seed));
        let k = rng.gen_range(2..=4);
        let (n, alpha) = (rng.gen_range(1..=6), rng.gen_range(0..=1));
        let game = random::multi_game(&mut rng, n, 2, k, alpha, true);
        for p in [Problem::NeAp, Problem::Spe] {
            let s = solver(p);
            let mut trace = OracleTrace::new();
            let got = s.run(Instance::Multi(&game), RunOptions::default(), &mut trace).unwrap();
            assert_eq!(got, s.direct(Instance::Multi(&game)).unwrap(), "{p} seed {seed}");
            s.check_shape(&trace, k).unwrap();
            if p == Problem::NeAp {
                assert!(trace.count(OracleKind::Lpo) <= 2 * (k - 1));
            }
        }
    }
}

#[test]
fn redacted_limits_change_nothing() {
    for seed in 0..30u64 {
        let mut rng = random::rng(random::split_seed(46, seed));
        let game = random::multi_game(&mut rng, 6, 2, 3, 1, true);
        let s = solver(Problem::Spe);
        let full = s.run(Instance::Multi(&game), RunOptions::default(), &mut OracleTrace::new()).unwrap();
        let redacted = RunOptions { redact_stabilization: true };
        assert_eq!(s.run(Instance::Multi(&game), redacted, &mut OracleTrace::new()).unwrap(), full);
    }
}

#[test]
fn limit_of_staged_winners_is_the_winner() {
    for seed in 0..30u64 {
        let mut rng = random::rng(random::split_seed(47, seed));
        let game = random::chain_game(&mut rng, 6, 2);
        let r = Realized::new(&game).unwrap();
        let accept = r.compiled.acceptance();
        let stages: Vec<Value> = (0..=r.product.len())
            .map(|t| Value::Bit(solve_weak_staged(&r.product, &accept, t).winner[0] == Side::One))
            .collect();
        let wrapped = Pipeline::Jump(Box::new(Pipeline::Identity));
        let mut trace = OracleTrace::new();
        let bit = wrapped.run(Value::Approx(stages, None), &mut trace).unwrap();
        assert_eq!(bit, Value::Bit(solve(&game).unwrap().root_winner() == Side::One));
        assert_eq!(trace.kinds(), vec![OracleKind::Lim]);
    }
}

#[test]
fn wrong_instance_kind_is_rejected() {
    let mut rng = random::rng(48);
    let game = random::multi_game(&mut rng, 4, 2, 2, 1, true);
    let err = solver(Problem::Win).run(Instance::Multi(&game), RunOptions::default(), &mut OracleTrace::new());
    assert!(err.is_err());
    assert!(matches!(
        solver(Problem::Spe).direct(Instance::Multi(&game)).unwrap(),
        Answer::Profile(_)
    ));
}
