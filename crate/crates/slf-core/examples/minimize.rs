// scratch: minimize a safra disagreement
use slf_core::limits::Limits;
use slf_core::safra::determinize;
use slf_core::values::ValueSet;
use slf_core::word::{dpw_lasso_member, nbw_lasso_member, Nbw, WordAlphabet};
use slf_core::lasso::LassoWord;
use slf_core::rat::Rat;

fn splitmix(seed: &mut u64) -> u64 {
    *seed = seed.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *seed;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn main() {
    let alpha = WordAlphabet::new(
        vec!["a".into()],
        vec![ValueSet::boolean()],
        &Limits::default(),
    ).unwrap();
    let mut seed: u64 = 7;
    let mut found = 0;
    for trial in 0..200000 {
        let n_states = 2 + (splitmix(&mut seed) as usize) % 2; // 2..3
        let letters = alpha.n_letters();
        let mut trans = Vec::new();
        for _ in 0..n_states {
            let mut row = Vec::new();
            for _ in 0..letters {
                let mut succs = Vec::new();
                for q in 0..n_states {
                    if splitmix(&mut seed) % 100 < 50 { succs.push(q); }
                }
                row.push(succs);
            }
            trans.push(row);
        }
        let accepting: Vec<bool> = (0..n_states).map(|_| splitmix(&mut seed) % 2 == 0).collect();
        let ninit = 1 + (splitmix(&mut seed) as usize) % n_states;
        let initial: Vec<usize> = (0..ninit).collect();
        let n = Nbw { alphabet: alpha.clone(), n_states, initial, trans, accepting };
        let d = determinize(&n, &Limits::default()).unwrap();
        for _ in 0..60 {
            let plen = (splitmix(&mut seed) as usize) % 3;
            let clen = 1 + (splitmix(&mut seed) as usize) % 3;
            let mk = |seed: &mut u64| -> Vec<Rat> {
                let li = (splitmix(seed) as usize) % alpha.n_letters();
                alpha.letters[li].clone()
            };
            let mut s2 = seed;
            let w = LassoWord::new(alpha.atoms.clone(),
                (0..plen).map(|_| mk(&mut s2)).collect(),
                (0..clen).map(|_| mk(&mut s2)).collect());
            seed = s2;
            let want = nbw_lasso_member(&n, &w).unwrap();
            let got = dpw_lasso_member(&d, &w).unwrap();
            if want != got {
                println!("trial {trial}: states={n_states} init={:?} acc={:?}", n.initial, n.accepting);
                for (q, row) in n.trans.iter().enumerate() {
                    println!("  q{q}: on0 -> {:?}, on1 -> {:?}", row[0], row[1]);
                }
                println!("  word: prefix={:?} cycle={:?} want={want} got={got}", w.prefix, w.cycle);
                found += 1;
                if found > 4 { return; }
                break;
            }
        }
    }
    println!("no disagreement found in 200000 trials? found={found}");
}
