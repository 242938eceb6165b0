//! Adaptive explicit Runge-Kutta integrator of order 8 with embedded
//! 5th/3rd order error estimation (DOP853), on fixed-size real state vectors.

use crate::error::{Error, Result};

// Dormand-Prince 8(5,3) tableau (Hairer's DOP853 coefficients).
const C: [f64; 12] = [0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0];
const A: [[f64; 12]; 12] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0],
    [0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0],
    [-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0],
    [2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0],
];
const B: [f64; 12] = [0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259];
const E3: [f64; 12] = [-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082];
const E5: [f64; 12] = [0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;
const ORDER_EXPONENT: f64 = -1.0 / 8.0;

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions { rtol: tol, atol: tol, max_step: f64::INFINITY, max_steps: 5_000_000 }
    }
}

fn rms_scaled<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        let x = v[i] / scale[i];
        s += x * x;
    }
    (s / N as f64).sqrt()
}

/// Integrates y' = f(t, y) from `t0` to `t1` (t1 >= t0). `samples` must be
/// sorted and lie in [t0, t1]; the observer is called with the exact state at
/// each of them (steps are clipped so samples are hit, not interpolated).
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: OdeOptions,
    samples: &[f64],
    mut observer: O,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
    O: FnMut(f64, &[f64; N]),
{
    if t0.is_nan() || t1.is_nan() || t1 < t0 {
        return Err(Error::InvalidArgument(format!("integration interval [{t0}, {t1}] is reversed")));
    }
    let mut t = t0;
    let mut y = y0;
    let mut next_sample = 0usize;
    while next_sample < samples.len() && samples[next_sample] <= t0 {
        observer(samples[next_sample], &y);
        next_sample += 1;
    }
    if t1 == t0 {
        return Ok(y);
    }
    let mut k = [[0.0; N]; 12];
    let mut fy = [0.0; N];
    f(t, &y, &mut fy);
    let mut h = initial_step(&mut f, t, &y, &fy, opts).min(opts.max_step).min(t1 - t0);
    let mut steps = 0usize;
    let mut rejected_last = false;
    let mut ytmp = [0.0; N];
    let mut ynew = [0.0; N];
    let mut scale = [0.0; N];
    let mut e5 = [0.0; N];
    let mut e3 = [0.0; N];
    while t < t1 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::IntegrationFailure { tau: t, reason: "maximum number of steps exceeded".into() });
        }
        let min_step = 10.0 * f64::EPSILON * t.abs().max(1.0);
        if h < min_step {
            return Err(Error::IntegrationFailure { tau: t, reason: "step size underflow".into() });
        }
        // clip to the next sample or the end
        let target = if next_sample < samples.len() { samples[next_sample].min(t1) } else { t1 };
        let mut hit = false;
        let mut hs = h;
        if t + hs >= target {
            hs = target - t;
            hit = true;
        } else if t + 1.5 * hs >= target {
            hs = 0.5 * (target - t);
        }
        k[0] = fy;
        for s in 1..12 {
            for i in 0..N {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += A[s][j] * k[j][i];
                }
                ytmp[i] = y[i] + hs * acc;
            }
            f(t + C[s] * hs, &ytmp, &mut k[s]);
        }
        for i in 0..N {
            let mut acc = 0.0;
            let mut a5 = 0.0;
            let mut a3 = 0.0;
            for s in 0..12 {
                acc += B[s] * k[s][i];
                a5 += E5[s] * k[s][i];
                a3 += E3[s] * k[s][i];
            }
            ynew[i] = y[i] + hs * acc;
            scale[i] = opts.atol + y[i].abs().max(ynew[i].abs()) * opts.rtol;
            e5[i] = a5;
            e3[i] = a3;
        }
        let n5 = rms_scaled(&e5, &scale).powi(2) * N as f64;
        let n3 = rms_scaled(&e3, &scale).powi(2) * N as f64;
        let err = if n5 == 0.0 && n3 == 0.0 {
            0.0
        } else {
            hs * n5 / ((n5 + 0.01 * n3) * N as f64).sqrt()
        };
        if !err.is_finite() {
            return Err(Error::IntegrationFailure { tau: t, reason: "non-finite error estimate".into() });
        }
        if err <= 1.0 {
            let mut factor = if err == 0.0 { MAX_FACTOR } else { (SAFETY * err.powf(ORDER_EXPONENT)).min(MAX_FACTOR) };
            if rejected_last {
                factor = factor.min(1.0);
            }
            t = if hit { target } else { t + hs };
            y = ynew;
            f(t, &y, &mut fy);
            if hit {
                while next_sample < samples.len() && samples[next_sample] <= t {
                    observer(samples[next_sample], &y);
                    next_sample += 1;
                }
                // a step shortened for a sample says nothing about the scale
                h = h.max(hs * factor).min(opts.max_step);
            } else {
                h = (hs * factor).min(opts.max_step);
            }
            rejected_last = false;
        } else {
            h = hs * (SAFETY * err.powf(ORDER_EXPONENT)).max(MIN_FACTOR);
            rejected_last = true;
        }
    }
    while next_sample < samples.len() {
        observer(samples[next_sample], &y);
        next_sample += 1;
    }
    Ok(y)
}

fn initial_step<const N: usize, F>(f: &mut F, t: f64, y: &[f64; N], fy: &[f64; N], opts: OdeOptions) -> f64
where
    F: FnMut(f64, &[f64; N], &mut [f64; N]),
{
    let mut scale = [0.0; N];
    for i in 0..N {
        scale[i] = opts.atol + y[i].abs() * opts.rtol;
    }
    let d0 = rms_scaled(y, &scale);
    let d1 = rms_scaled(fy, &scale);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let mut y1 = [0.0; N];
    for i in 0..N {
        y1[i] = y[i] + h0 * fy[i];
    }
    let mut f1 = [0.0; N];
    f(t + h0, &y1, &mut f1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - fy[i];
    }
    let d2 = rms_scaled(&diff, &scale) / h0;
    let h1 = if d1 <= 1e-15 && d2 <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 8.0)
    };
    (100.0 * h0).min(h1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let y = integrate(|_t, y: &[f64; 1], d: &mut [f64; 1]| d[0] = -y[0], 0.0, [1.0], 5.0, OdeOptions::with_tol(1e-12), &[], |_, _| {})
            .unwrap();
        assert!((y[0] - (-5f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn harmonic_samples_are_exact_points() {
        let samples = [0.0, 0.5, 1.0, 2.0, 7.5];
        let mut seen = Vec::new();
        let y = integrate(
            |_t, y: &[f64; 2], d: &mut [f64; 2]| {
                d[0] = y[1];
                d[1] = -y[0];
            },
            0.0,
            [1.0, 0.0],
            10.0,
            OdeOptions::with_tol(1e-12),
            &samples,
            |t, y| seen.push((t, y[0])),
        )
        .unwrap();
        assert_eq!(seen.len(), samples.len());
        for (t, v) in seen {
            assert!((v - t.cos()).abs() < 1e-10, "t = {t}");
        }
        assert!((y[0] - 10f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn reports_failure_location() {
        // y' = y^2 blows up at t = 1
        let r = integrate(|_t, y: &[f64; 1], d: &mut [f64; 1]| d[0] = y[0] * y[0], 0.0, [1.0], 2.0, OdeOptions::with_tol(1e-10), &[], |_, _| {});
        match r {
            Err(Error::IntegrationFailure { tau, .. }) => assert!((tau - 1.0).abs() < 1e-2),
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
