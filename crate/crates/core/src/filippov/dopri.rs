//! Dormand-Prince 5(4) steps for small non-autonomous systems.

pub type Vec2 = [f64; 2];

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One step of size `h`. Returns the fifth-order solution and the
/// embedded error estimate.
pub fn step<F: Fn(f64, Vec2) -> Vec2>(f: &F, t: f64, y: Vec2, h: f64) -> (Vec2, Vec2) {
    let mut k = [[0.0; 2]; 7];
    k[0] = f(t, y);
    for s in 1..7 {
        let mut ys = y;
        for (j, kj) in k.iter().enumerate().take(s) {
            ys[0] += h * A[s][j] * kj[0];
            ys[1] += h * A[s][j] * kj[1];
        }
        if s == 6 {
            // FSAL row: ys is the fifth-order solution.
            k[6] = f(t + h, ys);
            let err = [0, 1].map(|i| h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>());
            return (ys, err);
        }
        k[s] = f(t + C[s] * h, ys);
    }
    unreachable!()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepControl {
    Adaptive { rtol: f64, atol: f64, h_max: f64 },
    /// Fixed step size, for reproducibility checks.
    Fixed(f64),
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl::Adaptive { rtol: 1e-10, atol: 1e-12, h_max: 0.1 }
    }
}

/// Step-size driver. `propose` gives the next trial step; `judge` accepts or
/// rejects a trial and updates the proposal.
#[derive(Debug, Clone, Copy)]
pub struct Stepper {
    pub control: StepControl,
    h: f64,
}

pub const H_MIN: f64 = 1e-14;

impl Stepper {
    pub fn new(control: StepControl) -> Self {
        let h = match control {
            StepControl::Adaptive { h_max, .. } => h_max.min(1e-3),
            StepControl::Fixed(h) => h,
        };
        Self { control, h }
    }

    pub fn propose(&self) -> f64 {
        self.h
    }

    /// Returns whether the trial step is accepted.
    pub fn judge(&mut self, y0: Vec2, y1: Vec2, err: Vec2) -> bool {
        match self.control {
            StepControl::Fixed(_) => true,
            StepControl::Adaptive { rtol, atol, h_max } => {
                let e = (0..2)
                    .map(|i| {
                        let sc = atol + rtol * y0[i].abs().max(y1[i].abs());
                        (err[i] / sc).powi(2)
                    })
                    .sum::<f64>()
                    / 2.0;
                let e = e.sqrt();
                let fac = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
                let ok = e <= 1.0;
                let fac = if ok { fac } else { fac.min(1.0) };
                self.h = (self.h * fac).min(h_max);
                ok
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotate(_t: f64, y: Vec2) -> Vec2 {
        [y[1], -y[0]]
    }

    fn integrate(control: StepControl, t_end: f64) -> Vec2 {
        let mut st = Stepper::new(control);
        let (mut t, mut y) = (0.0, [1.0, 0.0]);
        while t < t_end {
            let h = st.propose().min(t_end - t);
            let (y1, err) = step(&rotate, t, y, h);
            if st.judge(y, y1, err) {
                t += h;
                y = y1;
            }
        }
        y
    }

    #[test]
    fn harmonic_oscillator_to_tolerance() {
        let y = integrate(StepControl::Adaptive { rtol: 1e-12, atol: 1e-14, h_max: 0.5 }, 10.0);
        assert!((y[0] - 10f64.cos()).abs() < 1e-10);
        assert!((y[1] + 10f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn fixed_steps_converge_at_fifth_order() {
        let err = |h: f64| (integrate(StepControl::Fixed(h), 2.0)[0] - 2f64.cos()).abs();
        let ratio = err(0.02) / err(0.01);
        assert!(ratio > 25.0 && ratio < 40.0, "ratio {ratio}");
    }
}
