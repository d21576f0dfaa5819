//! Small shared utilities: deterministic RNG, bracketed root finding.

/// splitmix64: tiny deterministic RNG for seeded perturbations and tests.
/// Byte-identical across platforms, which the profile sweep and compare
/// pipelines rely on.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Bisection on a bracketed sign change, refined until the interval or the
/// residual is below tolerance. `f` must be continuous on [a, b] with
/// f(a) and f(b) of opposite sign (zero endpoints are accepted as roots).
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    fa_in: f64,
    tol_x: f64,
    tol_f: f64,
    max_iter: usize,
) -> (f64, f64) {
    let mut fa = fa_in;
    if fa == 0.0 {
        return (a, 0.0);
    }
    let mut best = (a, fa);
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm == 0.0 || fm.abs() < tol_f || (b - a).abs() < tol_x {
            return (m, fm);
        }
        if (fa > 0.0) == (fm > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    best
}

/// Expands a symmetric bracket around `center` until `f` changes sign.
/// Returns (a, b, fa) with a sign change across [a, b], or None.
pub fn expand_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    center: f64,
    initial_half_width: f64,
    max_half_width: f64,
) -> Option<(f64, f64, f64)> {
    let mut w = initial_half_width;
    let fc = f(center);
    if fc == 0.0 {
        return Some((center, center, fc));
    }
    while w <= max_half_width {
        let (a, b) = (center - w, center + w);
        let fa = f(a);
        if fa == 0.0 || (fa > 0.0) != (fc > 0.0) {
            return Some((a, center, fa));
        }
        let fb = f(b);
        if fb == 0.0 || (fb > 0.0) != (fc > 0.0) {
            return Some((center, b, fc));
        }
        w *= 2.0;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn bisect_finds_cube_root() {
        let f = |x: f64| x * x * x - 2.0;
        let (x, fx) = bisect(f, 0.0, 2.0, -2.0, 1e-15, 1e-14, 200);
        assert!((x - 2f64.powf(1.0 / 3.0)).abs() < 1e-12, "x={x} f={fx}");
    }
}
