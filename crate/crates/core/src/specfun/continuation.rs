//! Analytic continuation of second-order linear ODE solutions by chained
//! local Taylor expansions, with first-order error propagation through the
//! exact step transfer matrices.

use crate::error::{Error, Result};
use num_complex::Complex64 as C;

pub(crate) trait LocalTaylor {
    /// Scaled coefficient u_{k+2} = c_{k+2} h^{k+2} of the local expansion at
    /// `z0`, given u_0..=u_{k+1}.
    fn next_scaled(&self, z0: C, h: C, k: usize, u: &[C]) -> C;
    /// Largest step that keeps the local series well conditioned.
    fn max_step(&self, z0: C) -> f64;
}

const EPS: f64 = 1.2e-16;
const MAX_TERMS: usize = 400;
const MAX_STEPS: usize = 200_000;

struct Step {
    // [[y_a, y_b], [dy_a, dy_b]] for basis (1, 0) and (0, 1)
    phi: [[C; 2]; 2],
    // rounding error of the local sums, per unit initial data
    round: [[f64; 2]; 2],
}

fn basis_step<O: LocalTaylor + ?Sized>(ode: &O, z0: C, h: C) -> Result<Step> {
    let mut phi = [[C::new(0.0, 0.0); 2]; 2];
    let mut round = [[0.0; 2]; 2];
    let mut u = Vec::with_capacity(64);
    for (col, init) in [(C::new(1.0, 0.0), C::new(0.0, 0.0)), (C::new(0.0, 0.0), h)]
        .into_iter()
        .enumerate()
    {
        u.clear();
        u.push(init.0);
        u.push(init.1);
        let mut done = false;
        for k in 0..MAX_TERMS {
            let next = ode.next_scaled(z0, h, k, &u);
            u.push(next);
            let n = u.len();
            if n > 8 {
                let tail = u[n - 1].norm() + u[n - 2].norm() + u[n - 3].norm();
                let head: f64 = u.iter().map(|x| x.norm()).sum();
                if tail <= 1e-18 * head {
                    done = true;
                    break;
                }
            }
        }
        if !done {
            return Err(Error::OutOfRange {
                what: "continuation",
                detail: format!("local series did not converge at z = {z0}"),
            });
        }
        let (mut y, mut dy, mut ay, mut ady) = (C::new(0.0, 0.0), C::new(0.0, 0.0), 0.0, 0.0);
        for (k, uk) in u.iter().enumerate() {
            y += uk;
            ay += uk.norm();
            if k > 0 {
                dy += uk * k as f64;
                ady += uk.norm() * k as f64;
            }
        }
        // column 1 was started from u_1 = h, i.e. unit derivative
        phi[0][col] = y;
        phi[1][col] = dy / h;
        round[0][col] = 4.0 * EPS * ay;
        round[1][col] = 4.0 * EPS * ady / h.norm();
    }
    Ok(Step { phi, round })
}

fn matmul(a: &[[C; 2]; 2], b: &[[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut r = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

/// Continue (y, y') from `from` to `to` along the straight segment.
/// `err0` holds absolute errors of the starting y and y'. Returns the value,
/// derivative and an absolute error estimate for the value.
pub(crate) fn continue_segment<O: LocalTaylor + ?Sized>(
    ode: &O,
    from: C,
    to: C,
    y0: C,
    dy0: C,
    err0: [f64; 2],
) -> Result<(C, C, f64)> {
    let length = (to - from).norm();
    if length == 0.0 {
        return Ok((y0, dy0, err0[0]));
    }
    let dir = (to - from) / length;
    let mut z = from;
    let mut travelled = 0.0;
    let (mut y, mut dy) = (y0, dy0);
    let mut steps: Vec<Step> = Vec::new();
    let mut local: Vec<[f64; 2]> = Vec::new();
    while travelled < length {
        if steps.len() > MAX_STEPS {
            return Err(Error::OutOfRange {
                what: "continuation",
                detail: "too many steps".into(),
            });
        }
        let mut hl = ode.max_step(z).min(length - travelled);
        if length - travelled - hl < 1e-3 * hl {
            hl = length - travelled;
        }
        let h = dir * hl;
        let st = basis_step(ode, z, h)?;
        let ny = st.phi[0][0] * y + st.phi[0][1] * dy;
        let ndy = st.phi[1][0] * y + st.phi[1][1] * dy;
        local.push([
            st.round[0][0] * y.norm() + st.round[0][1] * dy.norm() + EPS * ny.norm(),
            st.round[1][0] * y.norm() + st.round[1][1] * dy.norm() + EPS * ndy.norm(),
        ]);
        steps.push(st);
        y = ny;
        dy = ndy;
        travelled += hl;
        z = if travelled >= length { to } else { from + dir * travelled };
    }
    // suffix products: P maps a perturbation after step k to the endpoint
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    let mut p = [[one, zero], [zero, one]];
    let mut err = 0.0;
    for (st, l) in steps.iter().zip(local.iter()).rev() {
        err += p[0][0].norm() * l[0] + p[0][1].norm() * l[1];
        p = matmul(&p, &st.phi);
    }
    err += p[0][0].norm() * err0[0] + p[0][1].norm() * err0[1];
    if !(y.re.is_finite() && y.im.is_finite()) {
        return Err(Error::NonFinite("continuation"));
    }
    Ok((y, dy, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    // y'' = -y
    struct Harmonic;
    impl LocalTaylor for Harmonic {
        fn next_scaled(&self, _z0: C, h: C, k: usize, u: &[C]) -> C {
            -u[k] * h * h / ((k + 1) * (k + 2)) as f64
        }
        fn max_step(&self, _z0: C) -> f64 {
            0.5
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let to = C::new(10.0, 0.0);
        let (y, dy, err) =
            continue_segment(&Harmonic, C::new(0.0, 0.0), to, C::new(1.0, 0.0), C::new(0.0, 0.0), [0.0, 0.0])
                .unwrap();
        assert!((y - to.cos()).norm() < 1e-13);
        assert!((dy + to.sin()).norm() < 1e-13);
        assert!(err < 1e-12 && err > 0.0);
    }

    #[test]
    fn growing_solution_amplifies_initial_error() {
        // along the imaginary axis the harmonic solutions grow like e^t
        let to = C::new(0.0, 10.0);
        let (_, _, err) =
            continue_segment(&Harmonic, C::new(0.0, 0.0), to, C::new(1.0, 0.0), C::new(0.0, 0.0), [1e-10, 0.0])
                .unwrap();
        assert!(err > 1e-10 * 10f64.cosh() * 0.99);
    }
}
