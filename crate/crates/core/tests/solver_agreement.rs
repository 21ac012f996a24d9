use galesolve::game::{Condition, Side, WinLoseGame};
use galesolve::pointclass::{eval_membership, eval_prefix, prefix_to_chain, CompiledCondition};
use galesolve::random;
use galesolve::verify::{brute_force_solve, check_strategies, DEFAULT_CAP};
use galesolve::winlose::{solve, solve_prefix_recursive};
use rand::Rng;

#[test]
fn chain_solver_matches_brute_force() {
    for seed in 0..200u64 {
        let mut rng = random::rng(random::split_seed(11, seed));
        let n = rng.gen_range(1..=7);
        let alpha = rng.gen_range(0..=3);
        let game = random::chain_game(&mut rng, n, alpha);
        let solved = solve(&game).unwrap();
        let brute = brute_force_solve(&game, DEFAULT_CAP).unwrap();
        assert_eq!(solved.solution.winner, brute.winner, "seed {seed}");
        let accept = solved.realized.compiled.acceptance();
        assert_eq!(
            check_strategies(solved.product(), &accept, &solved.solution),
            Ok(()),
            "seed {seed}"
        );
    }
}

#[test]
fn prefix_solvers_agree() {
    for seed in 0..150u64 {
        let mut rng = random::rng(random::split_seed(12, seed));
        let n = rng.gen_range(1..=5);
        let level = rng.gen_range(0..=3);
        let arena = random::arena(&mut rng, n, 2, 2);
        let set = random::prefix_set(&mut rng, &arena, level, true);
        let game = WinLoseGame::new(arena, Condition::Prefix(set)).unwrap();
        let direct = solve(&game).unwrap();
        let (rec, _) = solve_prefix_recursive(&game, 8).unwrap();
        assert_eq!(direct.solution.winner, rec.solution.winner, "seed {seed}");
        let brute = brute_force_solve(&game, DEFAULT_CAP).unwrap();
        assert_eq!(direct.solution.winner, brute.winner, "seed {seed}");
        let accept = rec.realized.compiled.acceptance();
        assert_eq!(
            check_strategies(rec.product(), &accept, &rec.solution),
            Ok(()),
            "seed {seed}"
        );
    }
}

#[test]
fn prefix_and_chain_evaluators_agree() {
    for seed in 0..60u64 {
        let mut rng = random::rng(random::split_seed(13, seed));
        let n = rng.gen_range(1..=6);
        let level = rng.gen_range(0..=3);
        let arena = random::arena(&mut rng, n, 2, 2);
        let set = random::prefix_set(&mut rng, &arena, level, true);
        let u = prefix_to_chain(&set, &arena).unwrap();
        assert_eq!(u.chain.alpha(), set.expr.level());
        let cc = CompiledCondition {
            alpha: u.chain.alpha(),
            complemented: u.complemented,
        };
        for _ in 0..100 {
            let play = random::lasso(&mut rng, &arena, arena.root());
            let moved = u.transport(&play).unwrap();
            let by_chain = eval_membership(&u.chain, &moved) != u.complemented;
            assert_eq!(set.eval(&play), by_chain, "seed {seed}");
            assert_eq!(cc.run(&u.chain, &moved), by_chain);
            if !set.complemented {
                assert_eq!(eval_prefix(&set.expr, &play), by_chain);
            }
        }
    }
}

#[test]
fn solved_plays_respect_the_condition() {
    for seed in 0..100u64 {
        let mut rng = random::rng(random::split_seed(14, seed));
        let game = random::chain_game(&mut rng, 6, 2);
        let solved = solve(&game).unwrap();
        let play = solved.play_from(solved.product().root());
        let member = game.condition.eval(&play);
        // Both players follow winning or spoiler moves, so the winner's
        // strategy decides the play.
        assert_eq!(Side::winning(member), solved.root_winner(), "seed {seed}");
    }
}
