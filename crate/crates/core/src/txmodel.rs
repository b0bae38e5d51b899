//! Transmit-side OSNR budgets for laser-array (SWS) and comb-based (MWS) transmitters.
//!
//! Each noise contribution is referenced at the point where it is injected; gains and
//! losses downstream scale signal and noise alike, so the transmit OSNR is the inverse
//! sum of the source OCNR, the comb amplifier OSNR and the booster amplifier OSNR.

use serde::{Deserialize, Serialize};

use crate::units::{db_to_linear, inverse_sum_db, linear_to_db, watts_to_dbm};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// J·s
    pub planck_constant: f64,
    /// Hz; 12.5 GHz, i.e. 0.1 nm around 1550 nm.
    pub reference_bandwidth: f64,
    /// Hz
    pub carrier_frequency: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            planck_constant: 6.62607015e-34,
            reference_bandwidth: 12.5e9,
            carrier_frequency: 193.4e12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierSpec {
    pub noise_figure_db: f64,
    /// Total output power limit; `None` means unbounded.
    pub max_output_power_dbm: Option<f64>,
}

impl AmplifierSpec {
    /// EDFA following the comb, limited to 26 dBm total output.
    pub fn comb_amplifier() -> Self {
        Self {
            noise_figure_db: 5.0,
            max_output_power_dbm: Some(26.0),
        }
    }

    pub fn booster() -> Self {
        Self {
            noise_figure_db: 5.0,
            max_output_power_dbm: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossBudget {
    /// Modulator insertion loss plus splitters and polarization optics.
    pub modulator_chain_loss_db: f64,
    pub mux_loss_db: f64,
    pub modulation_loss_db: f64,
    pub demux_loss_db: f64,
}

impl Default for LossBudget {
    fn default() -> Self {
        Self {
            modulator_chain_loss_db: 23.0,
            mux_loss_db: 5.0,
            modulation_loss_db: 5.0,
            demux_loss_db: 5.0,
        }
    }
}

impl LossBudget {
    /// Loss between the modulator input and the booster input.
    pub fn post_modulator_loss_db(&self) -> f64 {
        self.modulator_chain_loss_db + self.mux_loss_db + self.modulation_loss_db
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    /// One comb amplifier boosts all lines before the demultiplexer.
    JointAmplification,
    /// The lines are demultiplexed first and each gets its own amplifier.
    PerLineAmplification,
}

impl Architecture {
    pub fn as_str(self) -> &'static str {
        match self {
            Architecture::JointAmplification => "joint_amplification",
            Architecture::PerLineAmplification => "per_line_amplification",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FsrMode {
    Fixed,
    Flexible,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    Sws {
        /// Co-polarized carrier-to-noise ratio in 12.5 GHz. `+inf` drops the term.
        ocnr_db: f64,
        p_out_dbm: f64,
    },
    Mws {
        ocnr_db: f64,
        p_line_dbm: f64,
        n_lines: u32,
        fsr_mode: FsrMode,
        architecture: Architecture,
        /// Per-line power wanted at the modulator input, same as the SWS output power.
        target_line_power_dbm: f64,
    },
}

impl SourceSpec {
    pub fn reference_sws() -> Self {
        SourceSpec::Sws {
            ocnr_db: 55.0,
            p_out_dbm: 16.0,
        }
    }

    pub fn typical_mws(n_lines: u32, architecture: Architecture) -> Self {
        SourceSpec::Mws {
            ocnr_db: 45.0,
            p_line_dbm: -10.0,
            n_lines,
            fsr_mode: FsrMode::Flexible,
            architecture,
            target_line_power_dbm: 16.0,
        }
    }

    fn validate(&self) -> Result<()> {
        let (ocnr, n_lines) = match *self {
            SourceSpec::Sws { ocnr_db, .. } => (ocnr_db, 1),
            SourceSpec::Mws {
                ocnr_db, n_lines, ..
            } => (ocnr_db, n_lines),
        };
        if ocnr.is_nan() || ocnr <= 0.0 {
            return Err(Error::Domain(format!(
                "OCNR must be positive, got {ocnr} dB"
            )));
        }
        if n_lines == 0 {
            return Err(Error::Domain("a source needs at least one line".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OsnrContributions {
    pub ocnr_db: f64,
    /// Absent for SWS transmitters.
    pub ca_db: Option<f64>,
    pub ba_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TxBudgetResult {
    pub osnr_tx_db: f64,
    pub g_ca_db: f64,
    pub g_ba_db: f64,
    /// Joint architecture: total comb amplifier output. Per-line architecture: output
    /// of one of the per-line amplifiers. `None` for SWS.
    pub ca_output_total_dbm: Option<f64>,
    pub clamped: bool,
    pub osnr_contributions_db: OsnrContributions,
}

/// ASE noise power in watts within the reference bandwidth, for `polarizations`
/// noise states (1 for co-polarized only, 2 for both).
pub fn ase_noise_power(
    polarizations: u8,
    gain_db: f64,
    amp: &AmplifierSpec,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !(1..=2).contains(&polarizations) {
        return Err(Error::Domain(format!(
            "polarization count must be 1 or 2, got {polarizations}"
        )));
    }
    if gain_db.is_nan() || gain_db < 0.0 {
        return Err(Error::Domain(format!(
            "amplifier gain must be non-negative, got {gain_db} dB"
        )));
    }
    let g = db_to_linear(gain_db);
    let nf = db_to_linear(amp.noise_figure_db);
    Ok(f64::from(polarizations)
        * consts.planck_constant
        * consts.carrier_frequency
        * consts.reference_bandwidth
        * nf
        * (g - 1.0)
        / 2.0)
}

/// Unclamped comb amplifier gain bringing one line to `p_out_dbm` after the demux.
pub fn ca_gain(p_out_dbm: f64, p_line_dbm: f64, demux_loss_db: f64) -> f64 {
    p_out_dbm - (p_line_dbm - demux_loss_db)
}

/// Total output of a comb amplifier carrying `n_lines` equal lines.
pub fn ca_total_output(p_line_dbm: f64, g_ca_db: f64, n_lines: u32) -> Result<f64> {
    if n_lines == 0 {
        return Err(Error::Domain("n_lines must be at least 1".into()));
    }
    Ok(p_line_dbm + g_ca_db + linear_to_db(f64::from(n_lines)))
}

/// Reduces the gain so that the total output does not exceed `max_out_dbm`.
pub fn clamp_ca_gain(
    g_ca_db: f64,
    p_line_dbm: f64,
    n_lines: u32,
    max_out_dbm: f64,
) -> Result<(f64, bool)> {
    let out = ca_total_output(p_line_dbm, g_ca_db, n_lines)?;
    if out > max_out_dbm {
        Ok((
            max_out_dbm - p_line_dbm - linear_to_db(f64::from(n_lines)),
            true,
        ))
    } else {
        Ok((g_ca_db, false))
    }
}

fn osnr_db(signal_dbm: f64, noise_w: f64) -> f64 {
    if noise_w == 0.0 {
        f64::INFINITY
    } else {
        signal_dbm - watts_to_dbm(noise_w)
    }
}

pub fn tx_osnr(
    source: &SourceSpec,
    losses: &LossBudget,
    ca: &AmplifierSpec,
    ba: &AmplifierSpec,
    launch_per_channel_dbm: f64,
    consts: &PhysicalConstants,
) -> Result<TxBudgetResult> {
    source.validate()?;

    struct CaStage {
        gain_db: f64,
        osnr_db: f64,
        output_dbm: f64,
        clamped: bool,
    }

    let (ocnr_db, modulator_input_dbm, ca_stage) = match *source {
        SourceSpec::Sws { ocnr_db, p_out_dbm } => (ocnr_db, p_out_dbm, None),
        SourceSpec::Mws {
            ocnr_db,
            p_line_dbm,
            n_lines,
            architecture,
            target_line_power_dbm,
            ..
        } => {
            let unclamped = ca_gain(target_line_power_dbm, p_line_dbm, losses.demux_loss_db);
            let (gain_db, clamped, ca_out_line_dbm, output_dbm, mod_in) = match architecture {
                Architecture::JointAmplification => {
                    let (gain, clamped) = match ca.max_output_power_dbm {
                        Some(max) => clamp_ca_gain(unclamped, p_line_dbm, n_lines, max)?,
                        None => (unclamped, false),
                    };
                    let line_out = p_line_dbm + gain;
                    let total = ca_total_output(p_line_dbm, gain, n_lines)?;
                    (
                        gain,
                        clamped,
                        line_out,
                        total,
                        line_out - losses.demux_loss_db,
                    )
                }
                Architecture::PerLineAmplification => (
                    unclamped,
                    false,
                    target_line_power_dbm,
                    target_line_power_dbm,
                    target_line_power_dbm,
                ),
            };
            if gain_db < 0.0 {
                return Err(Error::Config(format!(
                    "comb amplifier would need {gain_db:.2} dB gain; the line power is too high for the loss chain"
                )));
            }
            let noise = ase_noise_power(1, gain_db, ca, consts)?;
            (
                ocnr_db,
                mod_in,
                Some(CaStage {
                    gain_db,
                    osnr_db: osnr_db(ca_out_line_dbm, noise),
                    output_dbm,
                    clamped,
                }),
            )
        }
    };

    let ba_input_dbm = modulator_input_dbm - losses.post_modulator_loss_db();
    let g_ba_db = launch_per_channel_dbm - ba_input_dbm;
    if g_ba_db < 0.0 {
        return Err(Error::Config(format!(
            "booster would need {g_ba_db:.2} dB gain; the source is too powerful for the loss chain"
        )));
    }
    let ba_osnr = osnr_db(
        launch_per_channel_dbm,
        ase_noise_power(2, g_ba_db, ba, consts)?,
    );

    let ca_osnr = ca_stage.as_ref().map(|c| c.osnr_db);
    let osnr_tx_db = inverse_sum_db([ocnr_db, ca_osnr.unwrap_or(f64::INFINITY), ba_osnr]);

    Ok(TxBudgetResult {
        osnr_tx_db,
        g_ca_db: ca_stage.as_ref().map_or(0.0, |c| c.gain_db),
        g_ba_db,
        ca_output_total_dbm: ca_stage.as_ref().map(|c| c.output_dbm),
        clamped: ca_stage.as_ref().is_some_and(|c| c.clamped),
        osnr_contributions_db: OsnrContributions {
            ocnr_db,
            ca_db: ca_osnr,
            ba_db: ba_osnr,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    PLine,
    Ocnr,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::PLine => "p_line_dbm",
            SweepVariable::Ocnr => "ocnr_db",
        }
    }
}

/// Parameters of a transmit OSNR sweep. The swept variable overrides the matching
/// MWS template field; the SWS reference is evaluated unchanged at every point.
#[derive(Debug, Clone, PartialEq)]
pub struct TxSweep {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub architectures: Vec<Architecture>,
    pub line_counts: Vec<u32>,
    pub mws_ocnr_db: f64,
    pub mws_p_line_dbm: f64,
    pub target_line_power_dbm: f64,
    pub sws: SourceSpec,
    pub losses: LossBudget,
    pub ca: AmplifierSpec,
    pub ba: AmplifierSpec,
    pub launch_per_channel_dbm: f64,
    pub consts: PhysicalConstants,
}

impl TxSweep {
    pub fn new(variable: SweepVariable, from: f64, to: f64, step: f64) -> Self {
        Self {
            variable,
            from,
            to,
            step,
            architectures: vec![
                Architecture::JointAmplification,
                Architecture::PerLineAmplification,
            ],
            line_counts: vec![4, 8],
            mws_ocnr_db: 45.0,
            mws_p_line_dbm: -10.0,
            target_line_power_dbm: 16.0,
            sws: SourceSpec::reference_sws(),
            losses: LossBudget::default(),
            ca: AmplifierSpec::comb_amplifier(),
            ba: AmplifierSpec::booster(),
            launch_per_channel_dbm: 0.0,
            consts: PhysicalConstants::default(),
        }
    }

    /// Sample points `from + i·step`, endpoint included when it lies on the grid.
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !self.from.is_finite() || !self.to.is_finite() {
            return Err(Error::Domain(
                "sweep step must be positive and bounds finite".into(),
            ));
        }
        if self.to < self.from {
            return Err(Error::Domain(format!(
                "empty sweep range [{}, {}]",
                self.from, self.to
            )));
        }
        let n = ((self.to - self.from) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| self.from + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveKind {
    SwsReference,
    Mws(Architecture),
}

impl CurveKind {
    pub fn label(self) -> &'static str {
        match self {
            CurveKind::SwsReference => "sws",
            CurveKind::Mws(a) => a.as_str(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxPoint {
    pub x: f64,
    pub osnr_tx_db: f64,
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TxCurve {
    pub kind: CurveKind,
    pub n_lines: u32,
    pub points: Vec<TxPoint>,
}

/// One curve per (architecture, line count) plus the SWS reference.
pub fn sweep_tx_osnr(sweep: &TxSweep) -> Result<Vec<TxCurve>> {
    let xs = sweep.points()?;
    let sws = tx_osnr(
        &sweep.sws,
        &sweep.losses,
        &sweep.ca,
        &sweep.ba,
        sweep.launch_per_channel_dbm,
        &sweep.consts,
    )?;
    let mut curves = vec![TxCurve {
        kind: CurveKind::SwsReference,
        n_lines: 1,
        points: xs
            .iter()
            .map(|&x| TxPoint {
                x,
                osnr_tx_db: sws.osnr_tx_db,
                clamped: false,
            })
            .collect(),
    }];
    for &architecture in &sweep.architectures {
        for &n_lines in &sweep.line_counts {
            let points = xs
                .iter()
                .map(|&x| {
                    let (ocnr_db, p_line_dbm) = match sweep.variable {
                        SweepVariable::PLine => (sweep.mws_ocnr_db, x),
                        SweepVariable::Ocnr => (x, sweep.mws_p_line_dbm),
                    };
                    let source = SourceSpec::Mws {
                        ocnr_db,
                        p_line_dbm,
                        n_lines,
                        fsr_mode: FsrMode::Flexible,
                        architecture,
                        target_line_power_dbm: sweep.target_line_power_dbm,
                    };
                    let r = tx_osnr(
                        &source,
                        &sweep.losses,
                        &sweep.ca,
                        &sweep.ba,
                        sweep.launch_per_channel_dbm,
                        &sweep.consts,
                    )?;
                    Ok(TxPoint {
                        x,
                        osnr_tx_db: r.osnr_tx_db,
                        clamped: r.clamped,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            curves.push(TxCurve {
                kind: CurveKind::Mws(architecture),
                n_lines,
                points,
            });
        }
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn run(source: SourceSpec) -> TxBudgetResult {
        run_with(source, AmplifierSpec::comb_amplifier())
    }

    fn run_with(source: SourceSpec, ca: AmplifierSpec) -> TxBudgetResult {
        tx_osnr(
            &source,
            &LossBudget::default(),
            &ca,
            &AmplifierSpec::booster(),
            0.0,
            &PhysicalConstants::default(),
        )
        .unwrap()
    }

    fn mws(ocnr: f64, p_line: f64, n: u32, arch: Architecture) -> SourceSpec {
        SourceSpec::Mws {
            ocnr_db: ocnr,
            p_line_dbm: p_line,
            n_lines: n,
            fsr_mode: FsrMode::Flexible,
            architecture: arch,
            target_line_power_dbm: 16.0,
        }
    }

    #[test]
    fn ase_noise_examples() {
        let c = PhysicalConstants::default();
        let amp = AmplifierSpec::booster();
        let n = ase_noise_power(2, 17.0, &amp, &c).unwrap();
        assert_abs_diff_eq!(n, 2.488_110_034_767_478e-7, epsilon = 1e-15);
        assert_abs_diff_eq!(watts_to_dbm(n), -36.041_304, epsilon = 1e-5);
        assert_eq!(ase_noise_power(2, 0.0, &amp, &c).unwrap(), 0.0);
        let n = ase_noise_power(1, 31.0, &amp, &c).unwrap();
        assert_abs_diff_eq!(n, 3.186_011_998_887_894e-6, epsilon = 1e-14);
    }

    #[test]
    fn ase_rejects_negative_gain_and_bad_polarization() {
        let c = PhysicalConstants::default();
        let amp = AmplifierSpec::booster();
        assert!(matches!(
            ase_noise_power(2, -1.0, &amp, &c),
            Err(Error::Domain(_))
        ));
        assert!(ase_noise_power(3, 10.0, &amp, &c).is_err());
    }

    #[test]
    fn ase_is_linear_in_gain_minus_one() {
        let c = PhysicalConstants::default();
        let amp = AmplifierSpec::booster();
        let g1 = 20.0;
        let g2 = linear_to_db(2.0 * (db_to_linear(g1) - 1.0) + 1.0);
        let n1 = ase_noise_power(2, g1, &amp, &c).unwrap();
        let n2 = ase_noise_power(2, g2, &amp, &c).unwrap();
        assert_abs_diff_eq!(n2 / n1, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn comb_amplifier_gain_and_output() {
        assert_eq!(ca_gain(16.0, -10.0, 5.0), 31.0);
        assert_eq!(ca_gain(16.0, 16.0, 0.0), 0.0);
        assert_eq!(ca_gain(16.0, -14.0, 5.0), 35.0);

        assert_abs_diff_eq!(
            ca_total_output(-10.0, 31.0, 4).unwrap(),
            27.0206,
            epsilon = 1e-4
        );
        assert_eq!(ca_total_output(-10.0, 31.0, 1).unwrap(), 21.0);
        assert_abs_diff_eq!(
            ca_total_output(-10.0, 26.9691, 8).unwrap(),
            26.0,
            epsilon = 1e-4
        );
        assert!(ca_total_output(-10.0, 31.0, 0).is_err());
    }

    #[test]
    fn clamp_examples() {
        let (g, c) = clamp_ca_gain(31.0, -10.0, 4, 26.0).unwrap();
        assert!(c);
        assert_abs_diff_eq!(g, 29.9794, epsilon = 1e-4);
        assert_eq!(clamp_ca_gain(31.0, -10.0, 1, 26.0).unwrap(), (31.0, false));
        let (g, c) = clamp_ca_gain(35.0, -14.0, 4, 26.0).unwrap();
        assert!(c);
        assert_abs_diff_eq!(g, 33.9794, epsilon = 1e-4);
    }

    #[test]
    fn clamp_is_idempotent() {
        let (g, _) = clamp_ca_gain(31.0, -10.0, 8, 26.0).unwrap();
        let (g2, clamped_again) = clamp_ca_gain(g, -10.0, 8, 26.0).unwrap();
        assert_eq!(g, g2);
        assert!(!clamped_again);
    }

    #[test]
    fn sws_reference_budget() {
        let r = run(SourceSpec::reference_sws());
        assert_abs_diff_eq!(r.osnr_tx_db, 35.986_455, epsilon = 1e-5);
        assert_eq!(r.g_ca_db, 0.0);
        assert_eq!(r.g_ba_db, 17.0);
        assert_eq!(r.osnr_contributions_db.ca_db, None);
        assert_eq!(r.ca_output_total_dbm, None);

        let no_ocnr = run(SourceSpec::Sws {
            ocnr_db: f64::INFINITY,
            p_out_dbm: 16.0,
        });
        assert_abs_diff_eq!(no_ocnr.osnr_tx_db, 36.041_304, epsilon = 1e-5);
    }

    #[test]
    fn per_line_budget_matches_oracle_and_ignores_line_count() {
        let a = run(mws(45.0, -10.0, 4, Architecture::PerLineAmplification));
        let b = run(mws(45.0, -10.0, 8, Architecture::PerLineAmplification));
        assert_abs_diff_eq!(a.osnr_tx_db, 34.431_396, epsilon = 1e-5);
        assert_eq!(a.osnr_tx_db.to_bits(), b.osnr_tx_db.to_bits());
        assert_eq!(a.g_ca_db, 31.0);
        assert!(!a.clamped);
    }

    #[test]
    fn joint_budget_matches_oracle() {
        let four = run(mws(45.0, -10.0, 4, Architecture::JointAmplification));
        assert!(four.clamped);
        assert_abs_diff_eq!(four.osnr_tx_db, 34.283_022, epsilon = 1e-5);
        assert!((four.ca_output_total_dbm.unwrap() - 26.0).abs() < 1e-9);

        let eight = run(mws(45.0, -10.0, 8, Architecture::JointAmplification));
        assert_abs_diff_eq!(eight.osnr_tx_db, 31.585_803, epsilon = 1e-5);
        assert_abs_diff_eq!(eight.g_ca_db, 26.969_100, epsilon = 1e-5);
    }

    #[test]
    fn contributions_bound_the_total() {
        for arch in [
            Architecture::JointAmplification,
            Architecture::PerLineAmplification,
        ] {
            for p in [-20.0, -10.0, 0.0] {
                let r = run(mws(45.0, p, 4, arch));
                let c = r.osnr_contributions_db;
                let min = c.ocnr_db.min(c.ca_db.unwrap()).min(c.ba_db);
                assert!(r.osnr_tx_db <= min);
            }
        }
    }

    #[test]
    fn joint_amplifier_sees_the_demux_loss_as_extra_input_power() {
        let unbounded = AmplifierSpec {
            noise_figure_db: 5.0,
            max_output_power_dbm: None,
        };
        // a single line puts out 21 dBm, below the 26 dBm limit
        let joint = run_with(
            mws(45.0, -10.0, 1, Architecture::JointAmplification),
            unbounded,
        );
        let clamped = run(mws(45.0, -10.0, 1, Architecture::JointAmplification));
        assert!(!clamped.clamped);
        assert_abs_diff_eq!(joint.osnr_tx_db, clamped.osnr_tx_db, epsilon = 1e-12);
        let per_line = run(mws(45.0, -10.0, 1, Architecture::PerLineAmplification));
        assert_eq!(joint.g_ca_db, per_line.g_ca_db);
        let gap = joint.osnr_contributions_db.ca_db.unwrap()
            - per_line.osnr_contributions_db.ca_db.unwrap();
        assert_abs_diff_eq!(gap, LossBudget::default().demux_loss_db, epsilon = 1e-12);
    }

    #[test]
    fn negative_gains_are_configuration_errors() {
        let too_strong = SourceSpec::Sws {
            ocnr_db: 55.0,
            p_out_dbm: 40.0,
        };
        let err = tx_osnr(
            &too_strong,
            &LossBudget::default(),
            &AmplifierSpec::comb_amplifier(),
            &AmplifierSpec::booster(),
            0.0,
            &PhysicalConstants::default(),
        );
        assert!(matches!(err, Err(Error::Config(_))));

        let hot_comb = mws(45.0, 30.0, 4, Architecture::PerLineAmplification);
        assert!(matches!(
            tx_osnr(
                &hot_comb,
                &LossBudget::default(),
                &AmplifierSpec::comb_amplifier(),
                &AmplifierSpec::booster(),
                0.0,
                &PhysicalConstants::default(),
            ),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn sweep_over_line_power_is_monotone() {
        let s = TxSweep::new(SweepVariable::PLine, -20.0, 0.0, 0.5);
        let curves = sweep_tx_osnr(&s).unwrap();
        assert_eq!(curves.len(), 5);
        for c in &curves {
            assert_eq!(c.points.len(), 41);
            for w in c.points.windows(2) {
                assert!(w[1].osnr_tx_db >= w[0].osnr_tx_db - 1e-12, "{:?}", c.kind);
            }
        }
    }

    #[test]
    fn sweep_over_ocnr_approaches_amplifier_limit() {
        let mut s = TxSweep::new(SweepVariable::Ocnr, 100.0, 100.0, 1.0);
        s.architectures = vec![Architecture::PerLineAmplification];
        s.line_counts = vec![4];
        let curves = sweep_tx_osnr(&s).unwrap();
        let r = run(mws(
            f64::INFINITY,
            -10.0,
            4,
            Architecture::PerLineAmplification,
        ));
        let limit = r.osnr_tx_db;
        assert_abs_diff_eq!(curves[1].points[0].osnr_tx_db, limit, epsilon = 1e-5);
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        assert!(TxSweep::new(SweepVariable::PLine, 0.0, -1.0, 0.5)
            .points()
            .is_err());
        assert!(TxSweep::new(SweepVariable::PLine, 0.0, 1.0, 0.0)
            .points()
            .is_err());
    }
}
