use serde::{Deserialize, Serialize};

/// Cap applied to margins of stability before averaging, so that banks
/// without required stable funding do not dominate the mean.
pub const MS_CAP: f64 = 10.0;

macro_rules! period_record {
    ($($(#[$doc:meta])* $name:ident),* $(,)?) => {
        /// Aggregate outputs of one period.
        #[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
        pub struct PeriodRecord {
            pub period: u32,
            $($(#[$doc])* pub $name: f64,)*
        }

        impl PeriodRecord {
            pub const VARIABLES: &'static [&'static str] = &[$(stringify!($name)),*];

            pub fn values(&self) -> Vec<f64> {
                vec![$(self.$name),*]
            }

            pub fn get(&self, name: &str) -> Option<f64> {
                match name {
                    $(stringify!($name) => Some(self.$name),)*
                    _ => None,
                }
            }
        }
    };
}

period_record! {
    /// Settled overnight volume.
    volume_on,
    /// Settled term volume.
    volume_term,
    rate_on,
    rate_term,
    gamma_on,
    gamma_term,
    gamma_matched_on,
    gamma_matched_term,
    df_on,
    df_term,
    lf_on,
    lf_term,
    excess_on,
    excess_term,
    /// Lending-facility usage.
    facility_rl,
    /// Deposit-facility placements from the interbank stage.
    facility_rd,
    /// Funds held at the deposit facility above the bills cap.
    parked,
    /// Interbank lending beyond the lenders' own offers.
    accommodation,
    ms_all,
    ms_deficit,
    ms_surplus,
    asf,
    rsf,
    pi_b,
    pi_l,
    flow_sum,
    flow_abs,
    delta_hpm_sum,
    output,
    consumption,
    loans_deficit,
    loans_surplus,
    loans_households,
    loans_firms,
    deposits,
    government_debt,
    bills_cb,
    advances,
    hpm,
    icb_d,
    icb_l,
    icb_t,
    pdu,
    theta,
    lbw,
    n_borrowers,
    n_lenders,
    n_matched,
    audit_residual,
}

impl PeriodRecord {
    pub fn volume(&self) -> f64 {
        self.volume_on + self.volume_term
    }

    pub fn facilities(&self) -> f64 {
        self.facility_rl + self.facility_rd
    }
}

/// One row of the per-segment interbank table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentRow {
    pub period: u32,
    pub replicate: u32,
    pub segment: &'static str,
    pub demand: f64,
    pub supply: f64,
    pub settled: f64,
    pub rate: f64,
    pub gamma: f64,
    pub rl: f64,
    pub rd: f64,
}
