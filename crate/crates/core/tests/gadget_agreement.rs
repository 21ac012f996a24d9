use galesolve::equilibria::{ne_ap, spe};
use galesolve::gadgets::{
    eval_sigma_lem, eval_sigma_llpo, gen_adjoin, gen_announce, gen_hat, gen_lem_game,
    gen_llpo_game, gen_spe_chain,
};
use galesolve::game::Side;
use galesolve::random;
use galesolve::verify::{check_nash, strategy_wins, DEFAULT_CAP};
use galesolve::winlose::{solve, Realized};
use rand::Rng;

/// Direct nested-loop evaluation, independent of the recursive evaluator.
fn nested(p: &galesolve::gadgets::FinBitInput) -> bool {
    let b = p.bound;
    match p.arity {
        1 => (0..=b).all(|a| p.bit(&[a])),
        2 => (0..=b).all(|a| (0..=b).any(|c| p.bit(&[a, c]))),
        3 => (0..=b).all(|a| (0..=b).any(|c| (0..=b).all(|d| p.bit(&[a, c, d])))),
        _ => unreachable!(),
    }
}

#[test]
fn lem_winner_matches_evaluator() {
    for n in 1..=3 {
        let mut seen = [false; 2];
        for seed in 0..40u64 {
            let mut rng = random::rng(random::split_seed(31 + n as u64, seed));
            let p = random::fin_bit_input(&mut rng, n, 2);
            let want = eval_sigma_lem(n, &p).unwrap();
            assert_eq!(want, nested(&p));
            let g = gen_lem_game(n, &p).unwrap();
            assert!(g.condition.level() <= n);
            assert_eq!(
                solve(&g).unwrap().root_winner(),
                Side::winning(want),
                "n {n} seed {seed}"
            );
            seen[usize::from(want)] = true;
        }
        assert_eq!(seen, [true, true], "n {n}: both answers occur");
    }
}

#[test]
fn llpo_answers_are_valid() {
    for seed in 0..30u64 {
        let mut rng = random::rng(random::split_seed(35, seed));
        let n = rng.gen_range(1..=3);
        let pairs: Vec<_> = (0..rng.gen_range(1..=3))
            .map(|_| random::llpo_pair(&mut rng, n, 1))
            .collect();
        let g = gen_llpo_game(n, &pairs).unwrap();
        let answers = g.extract(&solve(&g.game).unwrap()).unwrap();
        for (pr, a) in pairs.iter().zip(answers) {
            assert!(eval_sigma_llpo(n, pr).unwrap().contains(&a), "seed {seed}");
        }
    }
}

fn components(rng: &mut random::Rng64, count: usize) -> Vec<galesolve::game::WinLoseGame> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let alpha = rng.gen_range(0..=2);
            random::chain_game(rng, n, alpha)
        })
        .collect()
}

#[test]
fn combined_gadgets_decode_component_winners() {
    for seed in 0..25u64 {
        let mut rng = random::rng(random::split_seed(36, seed));
        let count = rng.gen_range(1..=3);
        let games = components(&mut rng, count);
        let winners: Vec<Side> = games
            .iter()
            .map(|g| solve(g).unwrap().root_winner())
            .collect();

        let hat = gen_hat(&games).unwrap();
        let all = winners.iter().all(|&w| w == Side::One);
        assert_eq!(
            solve(&hat).unwrap().root_winner(),
            Side::winning(all),
            "hat seed {seed}"
        );

        let chain = gen_spe_chain(&games).unwrap();
        assert_eq!(
            chain.decode(&spe(&chain.game).unwrap()).unwrap(),
            winners,
            "spe chain seed {seed}"
        );

        let ann = gen_announce(&games).unwrap();
        let cert = ne_ap(&ann.game).unwrap();
        let decoded = ann.decode(&cert);
        let winnable: std::collections::BTreeSet<usize> =
            (0..count).filter(|&i| winners[i] == Side::One).collect();
        assert_eq!(decoded.value, winnable.len() as i64, "announce seed {seed}");
        assert_eq!(decoded.announced, winnable, "announce seed {seed}");
    }
}

#[test]
fn adjoin_embeds_an_equilibrium_and_a_winning_strategy() {
    let mut done = 0;
    for seed in 0..200u64 {
        let mut rng = random::rng(random::split_seed(37, seed));
        let (n1, a1) = (rng.gen_range(1..=4), rng.gen_range(0..=2));
        let g1 = random::chain_game(&mut rng, n1, a1);
        if solve(&g1).unwrap().root_winner() != Side::One {
            continue;
        }
        let (n0, a0) = (rng.gen_range(1..=4), rng.gen_range(0..=2));
        let g0 = random::multi_game(&mut rng, n0, 2, 3, a0, true);
        let adj = gen_adjoin(&g0, &g1).unwrap();
        let cert = ne_ap(&adj.game).unwrap();
        let d = adj.decode(&cert);
        assert!(d.enters_g0, "seed {seed}");
        assert!(
            check_nash(&g0, &d.g0_profile, DEFAULT_CAP)
                .unwrap()
                .passed(),
            "seed {seed}"
        );
        let r = Realized::new(&g1).unwrap();
        let accept = r.compiled.acceptance();
        assert!(
            strategy_wins(&r.product, &accept, Side::One, &d.g1_moves, 0).unwrap(),
            "seed {seed}"
        );
        done += 1;
    }
    assert!(done >= 30);
}
