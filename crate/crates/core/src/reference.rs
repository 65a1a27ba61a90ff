//! Brute-force plaintext reference implementations.
//!
//! These are the independent oracles the validation battery and tests
//! compare encrypted execution against. They share no code with the engine
//! or the schedulers: plain nested loops over `Z_t`.

/// Schoolbook negacyclic polynomial product modulo `(x^n + 1, m)`.
pub fn negacyclic_mul(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let n = a.len();
    assert_eq!(n, b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            let prod = (a[i] as u128 * b[j] as u128 % m as u128) as u64;
            let k = i + j;
            if k < n {
                out[k] = ((out[k] as u128 + prod as u128) % m as u128) as u64;
            } else {
                out[k - n] = ((out[k - n] as u128 + m as u128 - prod as u128) % m as u128) as u64;
            }
        }
    }
    out
}

/// Stride-1 same-padding 2-D convolution over `Z_t`.
///
/// `input` is `c_i * w * w` (channel-major), `weights` is
/// `c_o * c_i * f_w * f_w`; out-of-image taps contribute zero. Returns a
/// `c_o * w * w` tensor.
pub fn conv2d_mod(
    input: &[u64],
    weights: &[u64],
    w: usize,
    f_w: usize,
    c_i: usize,
    c_o: usize,
    t: u64,
) -> Vec<u64> {
    assert_eq!(input.len(), c_i * w * w);
    assert_eq!(weights.len(), c_o * c_i * f_w * f_w);
    assert!(f_w % 2 == 1);
    let half = (f_w / 2) as isize;
    let mut out = vec![0u64; c_o * w * w];
    for co in 0..c_o {
        for y in 0..w {
            for x in 0..w {
                let mut acc: u128 = 0;
                for ci in 0..c_i {
                    for dy in -half..=half {
                        for dx in -half..=half {
                            let sy = y as isize + dy;
                            let sx = x as isize + dx;
                            if sy < 0 || sy >= w as isize || sx < 0 || sx >= w as isize {
                                continue;
                            }
                            let pix = input[ci * w * w + sy as usize * w + sx as usize];
                            let tap = weights[co * c_i * f_w * f_w
                                + ci * f_w * f_w
                                + (dy + half) as usize * f_w
                                + (dx + half) as usize];
                            acc += pix as u128 * tap as u128 % t as u128;
                        }
                    }
                }
                out[co * w * w + y * w + x] = (acc % t as u128) as u64;
            }
        }
    }
    out
}

/// Matrix-vector product `W * x` over `Z_t`; `weights` is `n_o * n_i`
/// row-major.
pub fn matvec_mod(weights: &[u64], x: &[u64], n_i: usize, n_o: usize, t: u64) -> Vec<u64> {
    assert_eq!(weights.len(), n_i * n_o);
    assert_eq!(x.len(), n_i);
    let mut out = vec![0u64; n_o];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc: u128 = 0;
        for j in 0..n_i {
            acc += weights[i * n_i + j] as u128 * x[j] as u128 % t as u128;
        }
        *o = (acc % t as u128) as u64;
    }
    out
}
