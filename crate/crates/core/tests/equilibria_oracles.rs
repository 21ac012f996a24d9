use galesolve::equilibria::{
    best_guarantee, embed_win_lose, ne_ap, ne_multi, spe, threshold_game, Guarantees,
};
use galesolve::game::{outcome_of, Side};
use galesolve::random;
use galesolve::verify::{check_nash, check_spe, maximin, DEFAULT_CAP};
use galesolve::winlose::solve;
use rand::Rng;

#[test]
fn guarantees_match_positional_maximin() {
    for seed in 0..80u64 {
        let mut rng = random::rng(random::split_seed(21, seed));
        let n = rng.gen_range(1..=6);
        let players = rng.gen_range(1..=3);
        let alpha = rng.gen_range(0..=3);
        let g = random::multi_game(&mut rng, n, players, 3, alpha, false);
        let product = g.product();
        for p in 0..g.players() {
            let table = Guarantees::compute(&g, p);
            for i in 0..product.len().min(4) {
                let s = product.state(i);
                let want = maximin(&g, p, s, DEFAULT_CAP).unwrap();
                assert_eq!(table.per_state[i], want, "seed {seed} player {p} state {s}");
            }
            assert_eq!(
                best_guarantee(&g, p, product.state(0)).unwrap(),
                table.per_state[0]
            );
        }
    }
}

#[test]
fn threshold_games_agree_with_the_product_solution() {
    for seed in 0..60u64 {
        let mut rng = random::rng(random::split_seed(22, seed));
        let g = random::multi_game(&mut rng, 5, 3, 3, 2, false);
        let p = rng.gen_range(0..3);
        let o = rng.gen_range(0..3);
        let upper = g.upper_set(p, o);
        let t = threshold_game(&g, p, &upper).unwrap();
        let direct = Guarantees::compute(&g, p);
        let wins = solve(&t.game).unwrap().root_winner() == Side::One;
        assert_eq!(wins, !g.prefers(p, o, direct.per_state[0]), "seed {seed}");
        for _ in 0..20 {
            let play = random::lasso(&mut rng, &g.arena, g.arena.root());
            let outcome = outcome_of(&g, &play);
            assert_eq!(t.game.condition.eval(&play), upper.contains(&outcome));
        }
    }
}

#[test]
fn constructed_profiles_pass_the_oracles() {
    for seed in 0..60u64 {
        let mut rng = random::rng(random::split_seed(23, seed));
        let n = rng.gen_range(1..=5);
        let alpha = rng.gen_range(0..=2);
        let multi = random::multi_game(&mut rng, n, 3, 3, alpha, false);
        let c = ne_multi(&multi, 8).unwrap();
        c.check_consistency(&multi).unwrap();
        assert!(
            check_nash(&multi, &c.profile, DEFAULT_CAP)
                .unwrap()
                .passed(),
            "ne_multi seed {seed}"
        );

        let ap = random::multi_game(&mut rng, n, 2, 3, alpha, true);
        let c = ne_ap(&ap).unwrap();
        assert!(
            check_nash(&ap, &c.profile, DEFAULT_CAP).unwrap().passed(),
            "ne_ap seed {seed}"
        );
        let root = ap.product().state(0);
        assert_eq!(c.outcome, maximin(&ap, 0, root, DEFAULT_CAP).unwrap());
        let s = spe(&ap).unwrap();
        assert!(
            check_spe(&ap, &s, DEFAULT_CAP).unwrap().passed(),
            "spe seed {seed}"
        );
    }
}

#[test]
fn win_lose_embedding_keeps_the_winner() {
    for seed in 0..60u64 {
        let mut rng = random::rng(random::split_seed(24, seed));
        let game = random::chain_game(&mut rng, 5, 2);
        let multi = embed_win_lose(&game).unwrap();
        let c = ne_ap(&multi).unwrap();
        let winner = solve(&game).unwrap().root_winner();
        assert_eq!(Side::winning(c.outcome == 1), winner, "seed {seed}");
    }
}
