// Scratch probe: how often does a random greedy 2-factor prefix extend to a
// full 3-factor cover of the {0,6,10} layer of Z_9 x Z_16?
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const M: usize = 9;
const N: usize = 16;
const DIFFS: [usize; 3] = [0, 6, 10];

// build one random row-monotone C_9-factor from available edges:
// avail[t][c][d] for transition t, column c, diff index d
fn random_factor(avail: &mut [[[bool; 3]; N]; M], rng: &mut ChaCha8Rng) -> Option<Vec<[[usize; N]; M]>> {
    // choose per transition a system sigma_t: c -> c + diff, injective,
    // composition = identity. Build cycle by cycle from each uncovered col.
    // Simpler: build cycles directly.
    let mut used_in_factor = [[false; N]; M]; // vertex covered
    let mut chosen: Vec<(usize, usize, usize)> = vec![]; // (t, c, d)
    for start in 0..N {
        if used_in_factor[0][start] { continue; }
        // walk up from (0,start)
        let mut path: Vec<(usize, usize, usize)> = vec![];
        let mut col = start;
        let mut ok = true;
        for t in 0..M {
            let target_forced = t == M - 1;
            let mut opts: Vec<usize> = (0..3).filter(|&d| {
                let nc = (col + DIFFS[d]) % N;
                avail[t][col][d]
                    && if target_forced { nc == start } else { !used_in_factor[(t + 1) % M][nc] || (t+1 == M && nc == start) }
            }).collect();
            if t < M - 1 {
                opts.retain(|&d| !used_in_factor[t + 1][(col + DIFFS[d]) % N]);
            }
            if opts.is_empty() { ok = false; break; }
            let &d = opts.choose(rng).unwrap();
            path.push((t, col, d));
            col = (col + DIFFS[d]) % N;
            if t < M - 1 { used_in_factor[t + 1][col] = true; }
        }
        if !ok { return None; }
        used_in_factor[0][start] = true;
        for &(t, c, d) in &path { avail[t][c][d] = false; chosen.push((t, c, d)); }
    }
    Some(vec![])
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trials = 200000;
    let mut both = 0;
    let mut full = 0;
    for _ in 0..trials {
        let mut avail = [[[true; 3]; N]; M];
        if random_factor(&mut avail, &mut rng).is_none() { continue; }
        if random_factor(&mut avail, &mut rng).is_none() { continue; }
        both += 1;
        // remainder forced: check it forms valid monotone cycles
        let mut good = true;
        'outer: for start in 0..N {
            let mut col = start;
            for t in 0..M {
                let d = (0..3).find(|&d| avail[t][col][d]);
                match d {
                    None => { good = false; break 'outer; }
                    Some(d) => col = (col + DIFFS[d]) % N,
                }
            }
            if col != start { good = false; break; }
        }
        if good { full += 1; }
    }
    println!("trials={trials} two-greedy-ok={both} full-cover={full}");
}
