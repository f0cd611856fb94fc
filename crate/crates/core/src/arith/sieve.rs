/// Odd-only sieve of Eratosthenes. Returns the primes `<= bound` in ascending order.
pub fn sieve_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let bound = bound as usize;
    // index i stands for the odd number 2i + 1
    let half = (bound - 1) / 2 + 1;
    let mut composite = vec![false; half];
    composite[0] = true; // 1
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= bound {
        if !composite[i] {
            let q = 2 * i + 1;
            let mut j = (q * q - 1) / 2;
            while j < half {
                composite[j] = true;
                j += q;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_pi(bound));
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| (2 * i + 1) as u64),
    );
    primes
}

fn estimate_pi(n: usize) -> usize {
    let x = n as f64;
    (1.26 * x / x.ln().max(1.0)) as usize + 8
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
