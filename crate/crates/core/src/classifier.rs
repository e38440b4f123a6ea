//! The attribute classifier: a d_model -> 256 -> 256 -> K MLP with ReLU
//! hidden layers and a softmax readout, trained with mini-batch Adam on
//! cross-entropy, plus the input-space gradients of steering losses that
//! every intervention consumes.
//!
//! Conventions fixed here for determinism:
//! - ReLU subgradient at exactly 0 is 0.
//! - One seeded shuffle per epoch; the last partial batch is kept.
//! - Per-sample batch gradients are summed strictly left to right.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::binio;
use crate::datasets::LabeledActivationSet;
use crate::error::{KsError, Result};
use crate::par;
use crate::rng::{gaussian_matrix, SeededRng};
use crate::tensor::{dot_f32, softmax, Tensor2};

/// Hidden width of both hidden layers.
pub const HIDDEN_DIM: usize = 256;

const KSCL_MAGIC: &[u8; 4] = b"KSCL";
const KSCL_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// LossSpec
// ---------------------------------------------------------------------------

/// Target and avoid class sets for a steering loss.
///
/// The sets must be disjoint and not both empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LossSpec {
    targets: BTreeSet<usize>,
    avoids: BTreeSet<usize>,
}

impl LossSpec {
    pub fn new(
        targets: impl IntoIterator<Item = usize>,
        avoids: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let targets: BTreeSet<usize> = targets.into_iter().collect();
        let avoids: BTreeSet<usize> = avoids.into_iter().collect();
        if targets.is_empty() && avoids.is_empty() {
            return Err(KsError::InvalidInput(
                "loss spec needs at least one target or avoid class".into(),
            ));
        }
        if targets.intersection(&avoids).next().is_some() {
            return Err(KsError::InvalidInput(
                "target and avoid sets must be disjoint".into(),
            ));
        }
        Ok(Self { targets, avoids })
    }

    pub fn targets_only(targets: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new(targets, [])
    }

    pub fn avoids_only(avoids: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::new([], avoids)
    }

    pub fn targets(&self) -> &BTreeSet<usize> {
        &self.targets
    }

    pub fn avoids(&self) -> &BTreeSet<usize> {
        &self.avoids
    }

    /// Size of the target combination (used for report grouping).
    pub fn combo_size(&self) -> usize {
        self.targets.len() + self.avoids.len()
    }

    pub fn validate_for(&self, num_classes: usize) -> Result<()> {
        for &c in self.targets.iter().chain(self.avoids.iter()) {
            if c >= num_classes {
                return Err(KsError::InvalidLabel {
                    label: c,
                    num_classes,
                });
            }
        }
        Ok(())
    }

    /// Compact text form, e.g. `+0+2-1`.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for t in &self.targets {
            s.push('+');
            s.push_str(&t.to_string());
        }
        for a in &self.avoids {
            s.push('-');
            s.push_str(&a.to_string());
        }
        s
    }
}

// ---------------------------------------------------------------------------
// TrainConfig
// ---------------------------------------------------------------------------

/// Mini-batch Adam settings. Defaults follow the standard Adam settings
/// (lr 1e-3, betas 0.9/0.999, eps 1e-8) with 30 epochs at batch size 32.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f32,
    pub beta1: f32,
    pub beta2: f32,
    pub epsilon: f32,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 30,
            batch_size: 32,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs < 1 {
            return Err(KsError::InvalidInput("epochs must be >= 1".into()));
        }
        if self.batch_size < 1 {
            return Err(KsError::InvalidInput("batch_size must be >= 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(KsError::InvalidInput("learning_rate must be > 0".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// MlpClassifier
// ---------------------------------------------------------------------------

/// Parameters of the two-hidden-layer attribute classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpClassifier {
    w1: Tensor2, // HIDDEN_DIM x d_model
    b1: Vec<f32>,
    w2: Tensor2, // HIDDEN_DIM x HIDDEN_DIM
    b2: Vec<f32>,
    w3: Tensor2, // num_classes x HIDDEN_DIM
    b3: Vec<f32>,
    d_model: usize,
    num_classes: usize,
}

impl MlpClassifier {
    /// Seeded Gaussian init: per-layer sigma 1/sqrt(fan_in), zero biases.
    pub fn init(d_model: usize, num_classes: usize, seed: u64) -> Result<Self> {
        Self::check_dims(d_model, num_classes)?;
        let mut rng = SeededRng::new(seed);
        let w1 = gaussian_matrix(&mut rng, HIDDEN_DIM, d_model, 1.0 / (d_model as f32).sqrt());
        let w2 = gaussian_matrix(
            &mut rng,
            HIDDEN_DIM,
            HIDDEN_DIM,
            1.0 / (HIDDEN_DIM as f32).sqrt(),
        );
        let w3 = gaussian_matrix(
            &mut rng,
            num_classes,
            HIDDEN_DIM,
            1.0 / (HIDDEN_DIM as f32).sqrt(),
        );
        Ok(Self {
            w1,
            b1: vec![0.0; HIDDEN_DIM],
            w2,
            b2: vec![0.0; HIDDEN_DIM],
            w3,
            b3: vec![0.0; num_classes],
            d_model,
            num_classes,
        })
    }

    /// All-zero parameters; maps everything to zero logits.
    pub fn zeros(d_model: usize, num_classes: usize) -> Result<Self> {
        Self::check_dims(d_model, num_classes)?;
        Ok(Self {
            w1: Tensor2::zeros(HIDDEN_DIM, d_model),
            b1: vec![0.0; HIDDEN_DIM],
            w2: Tensor2::zeros(HIDDEN_DIM, HIDDEN_DIM),
            b2: vec![0.0; HIDDEN_DIM],
            w3: Tensor2::zeros(num_classes, HIDDEN_DIM),
            b3: vec![0.0; num_classes],
            d_model,
            num_classes,
        })
    }

    fn check_dims(d_model: usize, num_classes: usize) -> Result<()> {
        if d_model < 1 {
            return Err(KsError::InvalidInput("d_model must be >= 1".into()));
        }
        if num_classes < 2 {
            return Err(KsError::InvalidInput("num_classes must be >= 2".into()));
        }
        Ok(())
    }

    pub fn d_model(&self) -> usize {
        self.d_model
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Raw weight access for verification oracles.
    pub fn raw_params(&self) -> (&Tensor2, &[f32], &Tensor2, &[f32], &Tensor2, &[f32]) {
        (&self.w1, &self.b1, &self.w2, &self.b2, &self.w3, &self.b3)
    }

    fn check_input(&self, a: &Tensor2) -> Result<()> {
        if a.cols() != self.d_model {
            return Err(KsError::ShapeMismatch {
                expected: format!("cols = {}", self.d_model),
                got: format!("cols = {}", a.cols()),
            });
        }
        Ok(())
    }

    /// Forward pass for one position, returning hidden pre-activations for
    /// backprop: (z1, h1, z2, h2, logits).
    fn forward_row(&self, x: &[f32]) -> RowCache {
        let mut z1 = vec![0.0f32; HIDDEN_DIM];
        for i in 0..HIDDEN_DIM {
            z1[i] = dot_f32(self.w1.row(i), x) + self.b1[i];
        }
        let h1: Vec<f32> = z1.iter().map(|&z| if z > 0.0 { z } else { 0.0 }).collect();
        let mut z2 = vec![0.0f32; HIDDEN_DIM];
        for i in 0..HIDDEN_DIM {
            z2[i] = dot_f32(self.w2.row(i), &h1) + self.b2[i];
        }
        let h2: Vec<f32> = z2.iter().map(|&z| if z > 0.0 { z } else { 0.0 }).collect();
        let mut logits = vec![0.0f32; self.num_classes];
        for i in 0..self.num_classes {
            logits[i] = dot_f32(self.w3.row(i), &h2) + self.b3[i];
        }
        RowCache { z1, h1, z2, h2, logits }
    }

    /// Per-position logits: row r of the output is the classifier applied to
    /// row r of `a`, independently of the other positions.
    pub fn forward_logits(&self, a: &Tensor2) -> Result<Tensor2> {
        self.check_input(a)?;
        let rows = par::map_indices(a.rows(), |r| self.forward_row(a.row(r)).logits);
        Ok(Tensor2::from_row_vecs(self.num_classes, rows))
    }

    /// Row-wise softmax over [`Self::forward_logits`].
    pub fn predict_probs(&self, a: &Tensor2) -> Result<Tensor2> {
        let logits = self.forward_logits(a)?;
        let rows = par::map_indices(logits.rows(), |r| {
            softmax(logits.row(r)).expect("logit rows are non-empty and finite")
        });
        Ok(Tensor2::from_row_vecs(self.num_classes, rows))
    }

    /// Argmax class per position (ties resolve to the lowest index).
    pub fn predict_classes(&self, a: &Tensor2) -> Result<Vec<usize>> {
        let logits = self.forward_logits(a)?;
        Ok((0..logits.rows()).map(|r| argmax(logits.row(r))).collect())
    }

    /// Exact reverse-mode gradient of [`steering_loss`] composed with
    /// [`Self::forward_logits`], with respect to the input activations.
    pub fn input_gradient(&self, a: &Tensor2, spec: &LossSpec) -> Result<Tensor2> {
        self.check_input(a)?;
        spec.validate_for(self.num_classes)?;
        let dlogits = loss_logit_gradient(a.rows(), self.num_classes, spec);
        let rows = par::map_indices(a.rows(), |r| self.backprop_row_to_input(a.row(r), &dlogits));
        Ok(Tensor2::from_row_vecs(self.d_model, rows))
    }

    fn backprop_row_to_input(&self, x: &[f32], dlogits: &[f32]) -> Vec<f32> {
        let cache = self.forward_row(x);
        let mut dh2 = vec![0.0f32; HIDDEN_DIM];
        for (k, &g) in dlogits.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            let wrow = self.w3.row(k);
            for j in 0..HIDDEN_DIM {
                dh2[j] += g * wrow[j];
            }
        }
        let dz2: Vec<f32> = dh2
            .iter()
            .zip(&cache.z2)
            .map(|(&d, &z)| if z > 0.0 { d } else { 0.0 })
            .collect();
        let mut dh1 = vec![0.0f32; HIDDEN_DIM];
        for i in 0..HIDDEN_DIM {
            let d = dz2[i];
            if d == 0.0 {
                continue;
            }
            let wrow = self.w2.row(i);
            for j in 0..HIDDEN_DIM {
                dh1[j] += d * wrow[j];
            }
        }
        let dz1: Vec<f32> = dh1
            .iter()
            .zip(&cache.z1)
            .map(|(&d, &z)| if z > 0.0 { d } else { 0.0 })
            .collect();
        let mut dx = vec![0.0f32; self.d_model];
        for i in 0..HIDDEN_DIM {
            let d = dz1[i];
            if d == 0.0 {
                continue;
            }
            let wrow = self.w1.row(i);
            for j in 0..self.d_model {
                dx[j] += d * wrow[j];
            }
        }
        dx
    }

    // -- checkpoint io ------------------------------------------------------

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(KSCL_MAGIC)?;
        binio::write_u32(w, KSCL_VERSION)?;
        binio::write_u32(w, self.d_model as u32)?;
        binio::write_u32(w, self.num_classes as u32)?;
        binio::write_tensor(w, &self.w1)?;
        binio::write_tensor(w, &row_tensor(&self.b1))?;
        binio::write_tensor(w, &self.w2)?;
        binio::write_tensor(w, &row_tensor(&self.b2))?;
        binio::write_tensor(w, &self.w3)?;
        binio::write_tensor(w, &row_tensor(&self.b3))?;
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        binio::check_magic(r, KSCL_MAGIC)?;
        let version = binio::read_u32(r)?;
        if version != KSCL_VERSION {
            return Err(KsError::Format(format!("unsupported KSCL version {version}")));
        }
        let d_model = binio::read_u32(r)? as usize;
        let num_classes = binio::read_u32(r)? as usize;
        let w1 = binio::read_tensor(r)?;
        let b1 = binio::read_tensor(r)?;
        let w2 = binio::read_tensor(r)?;
        let b2 = binio::read_tensor(r)?;
        let w3 = binio::read_tensor(r)?;
        let b3 = binio::read_tensor(r)?;
        let expect = |cond: bool, what: &str| {
            if cond {
                Ok(())
            } else {
                Err(KsError::Format(format!("KSCL shape mismatch in {what}")))
            }
        };
        expect(w1.rows() == HIDDEN_DIM && w1.cols() == d_model, "w1")?;
        expect(b1.rows() == 1 && b1.cols() == HIDDEN_DIM, "b1")?;
        expect(w2.rows() == HIDDEN_DIM && w2.cols() == HIDDEN_DIM, "w2")?;
        expect(b2.rows() == 1 && b2.cols() == HIDDEN_DIM, "b2")?;
        expect(w3.rows() == num_classes && w3.cols() == HIDDEN_DIM, "w3")?;
        expect(b3.rows() == 1 && b3.cols() == num_classes, "b3")?;
        Self::check_dims(d_model, num_classes).map_err(|e| KsError::Format(e.to_string()))?;
        Ok(Self {
            w1,
            b1: b1.data().to_vec(),
            w2,
            b2: b2.data().to_vec(),
            w3,
            b3: b3.data().to_vec(),
            d_model,
            num_classes,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        Self::read_from(&mut r)
    }
}

struct RowCache {
    z1: Vec<f32>,
    h1: Vec<f32>,
    z2: Vec<f32>,
    h2: Vec<f32>,
    logits: Vec<f32>,
}

fn row_tensor(v: &[f32]) -> Tensor2 {
    Tensor2::from_vec(1, v.len(), v.to_vec()).expect("bias vectors are finite")
}

pub(crate) fn argmax(xs: &[f32]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Steering loss
// ---------------------------------------------------------------------------

/// dL/dlogits for the steering loss; constant across rows and independent of
/// the logit values (the loss is linear in logits).
fn loss_logit_gradient(rows: usize, num_classes: usize, spec: &LossSpec) -> Vec<f32> {
    let mut g = vec![0.0f32; num_classes];
    let p = rows as f32;
    if !spec.targets().is_empty() {
        let scale = -1.0 / (p * spec.targets().len() as f32);
        for &t in spec.targets() {
            g[t] += scale;
        }
    }
    if !spec.avoids().is_empty() {
        let scale = 1.0 / (p * spec.avoids().len() as f32);
        for &t in spec.avoids() {
            g[t] += scale;
        }
    }
    g
}

/// Steering loss over a logit matrix: minus the mean of target-class logits
/// (when targets are present) plus the mean of avoid-class logits (when
/// avoids are present), with means taken over positions x classes.
pub fn steering_loss(logits: &Tensor2, spec: &LossSpec) -> Result<f32> {
    spec.validate_for(logits.cols())?;
    if logits.rows() == 0 {
        return Err(KsError::InvalidInput("steering loss over empty logits".into()));
    }
    let mut loss = 0.0f32;
    if !spec.targets().is_empty() {
        loss += -set_mean(logits, spec.targets());
    }
    if !spec.avoids().is_empty() {
        loss += set_mean(logits, spec.avoids());
    }
    Ok(loss)
}

fn set_mean(logits: &Tensor2, set: &BTreeSet<usize>) -> f32 {
    let mut sum = 0.0f32;
    for r in 0..logits.rows() {
        let row = logits.row(r);
        for &c in set {
            sum += row[c];
        }
    }
    sum / (logits.rows() * set.len()) as f32
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

/// Flat parameter layout used by Adam: w1 | b1 | w2 | b2 | w3 | b3.
fn param_count(d_model: usize, num_classes: usize) -> usize {
    HIDDEN_DIM * d_model + HIDDEN_DIM + HIDDEN_DIM * HIDDEN_DIM + HIDDEN_DIM
        + num_classes * HIDDEN_DIM + num_classes
}

/// Cross-entropy of one sample plus its parameter gradient, written into
/// `grad` (which the caller provides zeroed). Returns the sample loss.
fn sample_grad(clf: &MlpClassifier, x: &[f32], label: usize, grad: &mut [f32]) -> f32 {
    let d = clf.d_model;
    let k = clf.num_classes;
    let cache = clf.forward_row(x);

    // Stable log-softmax loss.
    let max = cache.logits.iter().copied().fold(f32::NEG_INFINITY, f32::max);
    let mut sum = 0.0f32;
    for &l in &cache.logits {
        sum += (l - max).exp();
    }
    let log_z = max + sum.ln();
    let loss = log_z - cache.logits[label];

    // dlogits = softmax - onehot.
    let mut dlogits: Vec<f32> = cache.logits.iter().map(|&l| (l - max).exp() / sum).collect();
    dlogits[label] -= 1.0;

    let (o_w1, o_b1, o_w2, o_b2, o_w3, o_b3) = (
        0,
        HIDDEN_DIM * d,
        HIDDEN_DIM * d + HIDDEN_DIM,
        HIDDEN_DIM * d + HIDDEN_DIM + HIDDEN_DIM * HIDDEN_DIM,
        HIDDEN_DIM * d + HIDDEN_DIM + HIDDEN_DIM * HIDDEN_DIM + HIDDEN_DIM,
        HIDDEN_DIM * d + HIDDEN_DIM + HIDDEN_DIM * HIDDEN_DIM + HIDDEN_DIM + k * HIDDEN_DIM,
    );

    // Output layer.
    for c in 0..k {
        let g = dlogits[c];
        grad[o_b3 + c] = g;
        let row = &mut grad[o_w3 + c * HIDDEN_DIM..o_w3 + (c + 1) * HIDDEN_DIM];
        for j in 0..HIDDEN_DIM {
            row[j] = g * cache.h2[j];
        }
    }
    let mut dh2 = vec![0.0f32; HIDDEN_DIM];
    for c in 0..k {
        let g = dlogits[c];
        let wrow = clf.w3.row(c);
        for j in 0..HIDDEN_DIM {
            dh2[j] += g * wrow[j];
        }
    }
    // Second hidden layer.
    let mut dz2 = dh2;
    for (dz, &z) in dz2.iter_mut().zip(&cache.z2) {
        if z <= 0.0 {
            *dz = 0.0;
        }
    }
    for i in 0..HIDDEN_DIM {
        let g = dz2[i];
        grad[o_b2 + i] = g;
        let row = &mut grad[o_w2 + i * HIDDEN_DIM..o_w2 + (i + 1) * HIDDEN_DIM];
        for j in 0..HIDDEN_DIM {
            row[j] = g * cache.h1[j];
        }
    }
    let mut dh1 = vec![0.0f32; HIDDEN_DIM];
    for i in 0..HIDDEN_DIM {
        let g = dz2[i];
        if g == 0.0 {
            continue;
        }
        let wrow = clf.w2.row(i);
        for j in 0..HIDDEN_DIM {
            dh1[j] += g * wrow[j];
        }
    }
    // First hidden layer.
    let mut dz1 = dh1;
    for (dz, &z) in dz1.iter_mut().zip(&cache.z1) {
        if z <= 0.0 {
            *dz = 0.0;
        }
    }
    for i in 0..HIDDEN_DIM {
        let g = dz1[i];
        grad[o_b1 + i] = g;
        let row = &mut grad[o_w1 + i * d..o_w1 + (i + 1) * d];
        for j in 0..d {
            row[j] = g * x[j];
        }
    }
    loss
}

struct Adam {
    m: Vec<f32>,
    v: Vec<f32>,
    t: i32,
}

impl Adam {
    fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    fn step(&mut self, params: &mut [&mut [f32]], grad: &[f32], cfg: &TrainConfig) {
        self.t += 1;
        let bc1 = 1.0 - cfg.beta1.powi(self.t);
        let bc2 = 1.0 - cfg.beta2.powi(self.t);
        let mut off = 0;
        for zone in params.iter_mut() {
            for p in zone.iter_mut() {
                let g = grad[off];
                self.m[off] = cfg.beta1 * self.m[off] + (1.0 - cfg.beta1) * g;
                self.v[off] = cfg.beta2 * self.v[off] + (1.0 - cfg.beta2) * g * g;
                let m_hat = self.m[off] / bc1;
                let v_hat = self.v[off] / bc2;
                *p -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
                off += 1;
            }
        }
        debug_assert_eq!(off, grad.len());
    }
}

/// Train `clf` on single-position labeled activations. Returns the trained
/// classifier and the per-epoch mean loss history (length = epochs).
pub fn train(
    mut clf: MlpClassifier,
    data: &LabeledActivationSet,
    cfg: &TrainConfig,
) -> Result<(MlpClassifier, Vec<f32>)> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(KsError::InvalidInput("training set is empty".into()));
    }
    if data.d_model() != clf.d_model {
        return Err(KsError::ShapeMismatch {
            expected: format!("d_model = {}", clf.d_model),
            got: format!("d_model = {}", data.d_model()),
        });
    }
    for e in data.entries() {
        if e.label as usize >= clf.num_classes {
            return Err(KsError::InvalidLabel {
                label: e.label as usize,
                num_classes: clf.num_classes,
            });
        }
    }

    let n = data.len();
    let n_params = param_count(clf.d_model, clf.num_classes);
    let mut adam = Adam::new(n_params);
    let mut rng = SeededRng::new(cfg.seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut history = Vec::with_capacity(cfg.epochs);

    for _epoch in 0..cfg.epochs {
        rng.shuffle(&mut order);
        let mut epoch_loss = 0.0f64;
        for batch in order.chunks(cfg.batch_size) {
            // Per-sample gradients computed independently (parallel), then
            // reduced left to right in sample order.
            let partials = par::map_ordered(batch, |&idx| {
                let entry = &data.entries()[idx];
                let mut g = vec![0.0f32; n_params];
                let loss = sample_grad(&clf, &entry.activation, entry.label as usize, &mut g);
                (g, loss)
            });
            let scale = 1.0 / batch.len() as f32;
            let mut grad = vec![0.0f32; n_params];
            for (g, loss) in partials {
                for (acc, x) in grad.iter_mut().zip(&g) {
                    *acc += x;
                }
                epoch_loss += loss as f64;
            }
            for g in grad.iter_mut() {
                *g *= scale;
            }
            let MlpClassifier {
                w1, b1, w2, b2, w3, b3, ..
            } = &mut clf;
            let mut zones: [&mut [f32]; 6] = [
                w1.data_mut(),
                b1.as_mut_slice(),
                w2.data_mut(),
                b2.as_mut_slice(),
                w3.data_mut(),
                b3.as_mut_slice(),
            ];
            adam.step(&mut zones, &grad, cfg);
        }
        history.push((epoch_loss / n as f64) as f32);
    }
    Ok((clf, history))
}

/// Fraction of entries whose argmax prediction matches the label.
pub fn accuracy(clf: &MlpClassifier, data: &LabeledActivationSet) -> Result<f32> {
    if data.is_empty() {
        return Err(KsError::InvalidInput("accuracy over empty set".into()));
    }
    let hits: usize = par::map_ordered(data.entries(), |e| {
        let cache = clf.forward_row(&e.activation);
        usize::from(argmax(&cache.logits) == e.label as usize)
    })
    .into_iter()
    .sum();
    Ok(hits as f32 / data.len() as f32)
}
