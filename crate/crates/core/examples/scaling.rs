use rule150::bench::time_method;
use rule150::Method;

fn main() {
    for k in 12..=22 {
        let t = time_method(Method::Iteration, 1 << k, 9).unwrap();
        println!("iteration 2^{k}: {t:?}");
    }
    for k in 10..=15 {
        let t = time_method(Method::Simulate, 1 << k, 5).unwrap();
        println!("simulate 2^{k}: {t:?}");
    }
}
