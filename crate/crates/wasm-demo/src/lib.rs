//! Browser demo: a random SQG field that can be smoothed by the heat
//! semigroup, split into Littlewood–Paley blocks, or time-stepped.
//!
//! [`Demo`] holds the logic and is plain Rust; [`SqgDemo`] is the thin
//! wasm-bindgen wrapper the page talks to.

use sqg_core::gevrey::{analyticity_radius_estimate, heat_semigroup};
use sqg_core::littlewood_paley::{BesovParams, DyadicSystem};
use sqg_core::solver::{Dealias, InitialData, Stepper};
use sqg_core::spectral::{inverse_transform, Grid};
use sqg_core::{Result, SpectralField};
use wasm_bindgen::prelude::*;

/// What the canvas currently shows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum View {
    State,
    Heat { t: f64 },
    Block { j: i32 },
}

pub struct Demo {
    sys: DyadicSystem,
    kappa: f64,
    alpha: f64,
    stepper: Stepper,
    theta: SpectralField,
    time: f64,
    view: View,
}

impl Demo {
    pub fn new(n: usize, seed: u64, kappa: f64, dt: f64) -> Result<Self> {
        let grid = Grid::periodic(n)?;
        let theta = InitialData::RandomBand {
            norm: 1.0,
            besov: BesovParams::new(1.2, 2.0, 2.0)?,
            seed,
        }
        .build(grid)?;
        Ok(Demo {
            sys: DyadicSystem::new(grid)?,
            kappa,
            alpha: 0.5 * kappa,
            stepper: Stepper::new(grid, kappa, dt, Dealias::TwoThirds),
            theta,
            time: 0.0,
            view: View::State,
        })
    }

    pub fn n(&self) -> usize {
        self.sys.grid().n()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn block_range(&self) -> (i32, i32) {
        (self.sys.j_min(), self.sys.j_max())
    }

    pub fn set_view(&mut self, view: View) {
        self.view = view;
    }

    pub fn step(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.theta = self.stepper.step(&self.theta)?;
            self.time += self.stepper.dt();
        }
        Ok(())
    }

    pub fn shown(&self) -> Result<SpectralField> {
        match self.view {
            View::State => Ok(self.theta.clone()),
            View::Heat { t } => heat_semigroup(&self.theta, t, self.kappa),
            View::Block { j } => self.sys.delta_j(&self.theta, j),
        }
    }

    /// One-line readout of the shown field: L² norm and decay-rate radius.
    pub fn status(&self) -> Result<String> {
        let f = self.shown()?;
        let radius = analyticity_radius_estimate(&f, self.alpha)?;
        Ok(format!(
            "t = {:.3}  |f|_2 = {:.4e}  radius(alpha = {:.2}) = {:.4}{}",
            self.time,
            f.l2_norm(),
            self.alpha,
            radius.gamma,
            if radius.low_signal {
                " (low signal)"
            } else {
                ""
            }
        ))
    }

    pub fn render(&self) -> Result<Vec<u8>> {
        Ok(to_rgba(inverse_transform(&self.shown()?)?.values()))
    }
}

/// Blue–white–red map, symmetric about zero and scaled to the max modulus.
pub fn to_rgba(values: &[f64]) -> Vec<u8> {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::with_capacity(4 * values.len());
    for &v in values {
        let x = if scale > 0.0 {
            (v / scale).clamp(-1.0, 1.0)
        } else {
            0.0
        };
        let fade = |c: f64| (255.0 * (1.0 - c)).round() as u8;
        let (r, g, b) = if x >= 0.0 {
            (255, fade(x), fade(x))
        } else {
            (fade(-x), fade(-x), 255)
        };
        out.extend_from_slice(&[r, g, b, 255]);
    }
    out
}

fn js(e: sqg_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct SqgDemo(Demo);

#[wasm_bindgen]
impl SqgDemo {
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, seed: u64, kappa: f64, dt: f64) -> Result<SqgDemo, JsError> {
        Demo::new(n, seed, kappa, dt).map(SqgDemo).map_err(js)
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn time(&self) -> f64 {
        self.0.time()
    }

    pub fn j_min(&self) -> i32 {
        self.0.block_range().0
    }

    pub fn j_max(&self) -> i32 {
        self.0.block_range().1
    }

    pub fn show_state(&mut self) {
        self.0.set_view(View::State);
    }

    pub fn show_heat(&mut self, t: f64) {
        self.0.set_view(View::Heat { t });
    }

    pub fn show_block(&mut self, j: i32) {
        self.0.set_view(View::Block { j });
    }

    pub fn step(&mut self, steps: usize) -> Result<(), JsError> {
        self.0.step(steps).map_err(js)
    }

    pub fn status(&self) -> Result<String, JsError> {
        self.0.status().map_err(js)
    }

    /// RGBA bytes, row-major, `n × n`.
    pub fn render(&self) -> Result<Vec<u8>, JsError> {
        self.0.render().map_err(js)
    }
}
