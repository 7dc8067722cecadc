use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use snapstream::time::BiTime;
use snapstream::windows::bsort;

fn main() {
    let mut rng = StdRng::seed_from_u64(1000);
    let n = rng.random_range(2..10usize);
    let mut perm: Vec<i64> = (0..n as i64).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    println!("perm = {:?}", perm);
    let input: Vec<(BiTime, usize)> = perm.iter().enumerate()
        .map(|(i, &e)| (BiTime::new(e, i as i64), i)).collect();
    for slack in 0..=9 {
        let out = bsort(slack, &input);
        let events: Vec<i64> = out.iter().map(|(bt, _)| bt.event.tick()).collect();
        println!("slack {}: {:?}", slack, events);
    }
}
