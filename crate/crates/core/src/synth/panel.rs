use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveTime;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::attention::{IpAssignment, Ip3, LogEntry, OrgIp};
use crate::econ::sample_sd;
use crate::edgar::Accession;
use crate::filing::Campaign;

use super::config::{Stream, SynthConfig};
use super::corpus::SynthCorpus;

/// One generated panel observation with its planted structure.
#[derive(Debug, Clone)]
pub struct SynthPanelRow {
    pub campaign_id: String,
    pub institution_id: String,
    pub holding: f64,
    pub holding_6m: f64,
    pub align: f64,
}

/// One campaign-level outcome observation.
#[derive(Debug, Clone)]
pub struct SynthOutcomeRow {
    pub campaign_id: String,
    pub ag_align: f64,
    pub own_dum: u8,
    pub win: u8,
}

#[derive(Debug, Clone)]
pub struct SynthPanel {
    pub rows: Vec<SynthPanelRow>,
    pub outcomes: Vec<SynthOutcomeRow>,
}

/// Generate an alignment panel with the holding coefficient planted on the
/// standardized scale (matching how the regression engine scales
/// regressors), plus campaign-level win outcomes from a linear probability
/// model with a planted interaction.
pub fn gen_panel(config: &SynthConfig) -> SynthPanel {
    let mut rng = config.rng(Stream::Panel);
    let n_c = config.n_campaigns;
    let n_i = config.n_institutions;

    // Holdings first, so the standardizing SD is known before aligns.
    let mut holdings = Vec::with_capacity(n_c * n_i);
    for _ in 0..n_c * n_i {
        // Mostly small stakes with occasional large ones.
        let log_h: f64 = rng.gen_range(-7.0..-2.5);
        let h = log_h.exp().min(0.12);
        let h = if rng.gen_bool(0.25) { 0.0 } else { h };
        holdings.push(h);
    }
    let sd = sample_sd(&holdings).max(f64::MIN_POSITIVE);

    let noise = Normal::new(0.0, config.noise_sd.max(f64::MIN_POSITIVE)).expect("valid sd");
    let delta_c: Vec<f64> = (0..n_c).map(|_| rng.gen_range(-0.05..0.05)).collect();
    let delta_i: Vec<f64> = (0..n_i).map(|_| rng.gen_range(-0.05..0.05)).collect();

    let mut rows = Vec::with_capacity(n_c * n_i);
    for c in 0..n_c {
        for i in 0..n_i {
            let holding = holdings[c * n_i + i];
            let eps = if config.noise_sd > 0.0 { noise.sample(&mut rng) } else { 0.0 };
            let align = 0.5
                + config.planted_beta_holding * (holding / sd)
                + delta_c[c]
                + delta_i[i]
                + eps;
            rows.push(SynthPanelRow {
                campaign_id: format!("camp{c:04}"),
                institution_id: format!("inst{i:03}"),
                holding,
                holding_6m: (holding * rng.gen_range(0.8..1.2)).min(0.12),
                align: align.clamp(0.0, 1.0),
            });
        }
    }

    let mut rng = config.rng(Stream::Outcomes);
    let ag: Vec<f64> = (0..n_c).map(|_| rng.gen_range(0.2..0.8)).collect();
    let ag_sd = sample_sd(&ag).max(f64::MIN_POSITIVE);
    let mut outcomes = Vec::with_capacity(n_c);
    for (c, &a) in ag.iter().enumerate() {
        let own = u8::from(rng.gen_bool(0.465));
        let z = a / ag_sd;
        let p_win = 0.55 + 0.02 * (z - 0.5 / ag_sd)
            + 0.01 * own as f64
            + config.planted_interaction * z * own as f64
            - config.planted_interaction * (0.5 / ag_sd) * own as f64;
        let win = u8::from(rng.gen_bool(p_win.clamp(0.02, 0.98)));
        outcomes.push(SynthOutcomeRow {
            campaign_id: format!("camp{c:04}"),
            ag_align: a,
            own_dum: own,
            win,
        });
    }

    SynthPanel { rows, outcomes }
}

/// Server-log fixture with planted per-(campaign, institution) view counts
/// plus the noise the filters must remove: a robot address, icon/XML/index
/// requests, undersized responses, and sub-five-minute duplicates.
#[derive(Debug, Clone)]
pub struct SynthLogs {
    pub entries: Vec<LogEntry>,
    pub org_ips: Vec<OrgIp>,
    pub patterns: Vec<(String, String)>,
    pub assignments: Vec<IpAssignment>,
    pub fight_docs: BTreeMap<String, BTreeSet<Accession>>,
    pub expected_views: BTreeMap<(String, String), u32>,
}

pub fn gen_logs(corpus: &SynthCorpus, config: &SynthConfig) -> SynthLogs {
    let mut rng = config.rng(Stream::Logs);
    let noon = NaiveTime::from_hms_opt(12, 0, 0).unwrap();

    let mut org_ips = Vec::new();
    let mut patterns = Vec::new();
    let mut assignments = Vec::new();
    for (i, inst) in corpus.institutions.iter().enumerate() {
        let prefix = Ip3([10, (i / 250) as u8, (i % 250) as u8]);
        let org_name = format!("{} Asset Management", inst.institution_id);
        for host in 0..3u8 {
            org_ips.push(OrgIp {
                org_name: org_name.clone(),
                ipv4: std::net::Ipv4Addr::new(prefix.0[0], prefix.0[1], prefix.0[2], 10 + host),
            });
        }
        patterns.push((
            inst.institution_id.clone(),
            format!(r".*{}.*", inst.institution_id),
        ));
        assignments.push(IpAssignment {
            ip3_prefix: prefix,
            institution_id: inst.institution_id.clone(),
            valid_from: None,
            valid_to: None,
        });
    }

    let mut fight_docs: BTreeMap<String, BTreeSet<Accession>> = BTreeMap::new();
    let mut entries = Vec::new();
    let mut expected_views = BTreeMap::new();

    for sc in &corpus.campaigns {
        let campaign: &Campaign = &sc.campaign;
        let docs: BTreeSet<Accession> = campaign.accessions().cloned().collect();
        let doc = docs.iter().next().expect("campaign has a filing").clone();
        fight_docs.insert(campaign.campaign_id.clone(), docs);

        for (i, inst) in corpus.institutions.iter().enumerate() {
            let views = rng.gen_range(0..4u32);
            if views == 0 {
                continue;
            }
            let prefix = assignments[i].ip3_prefix;
            for v in 0..views {
                let date = campaign.start_date + chrono::Duration::days(v as i64 + 1);
                entries.push(LogEntry {
                    ip3: prefix,
                    ip_suffix: "aaa".into(),
                    date,
                    time: noon,
                    cik: campaign.target_cik,
                    accession: doc.clone(),
                    extension: format!("{doc}.txt"),
                    size: 4096,
                    is_index: false,
                });
                // A duplicate four minutes later that must collapse.
                if v == 0 {
                    entries.push(LogEntry {
                        ip3: prefix,
                        ip_suffix: "aaa".into(),
                        date,
                        time: NaiveTime::from_hms_opt(12, 4, 0).unwrap(),
                        cik: campaign.target_cik,
                        accession: doc.clone(),
                        extension: format!("{doc}.txt"),
                        size: 4096,
                        is_index: false,
                    });
                }
            }
            // Icon and undersized noise that the validity filter removes.
            entries.push(LogEntry {
                ip3: prefix,
                ip_suffix: "aaa".into(),
                date: campaign.start_date,
                time: noon,
                cik: campaign.target_cik,
                accession: doc.clone(),
                extension: "favicon.ico".into(),
                size: 4096,
                is_index: false,
            });
            entries.push(LogEntry {
                ip3: prefix,
                ip_suffix: "aaa".into(),
                date: campaign.start_date,
                time: NaiveTime::from_hms_opt(13, 0, 0).unwrap(),
                cik: campaign.target_cik,
                accession: doc.clone(),
                extension: format!("{doc}.txt"),
                size: 120,
                is_index: false,
            });
            expected_views.insert(
                (
                    campaign.campaign_id.clone(),
                    inst.institution_id.clone(),
                ),
                views,
            );
        }
    }
    expected_views.retain(|_, v| *v > 0);

    // A robot day on the first institution's own prefix: more than a
    // thousand distinct filings, one of them a fight document. If robot
    // filtering were skipped this would inflate that pair's count.
    if let (Some(first), Some(assignment)) = (corpus.campaigns.first(), assignments.first()) {
        let robot_prefix = assignment.ip3_prefix;
        let date = first.campaign.start_date;
        let fight_doc = fight_docs[&first.campaign.campaign_id]
            .iter()
            .next()
            .expect("fight doc")
            .clone();
        for k in 0..1001u32 {
            let acc = if k == 0 {
                fight_doc.clone()
            } else {
                Accession::new(&format!("{:010}-16-{:06}", 999_999, k + 1)).unwrap()
            };
            entries.push(LogEntry {
                ip3: robot_prefix,
                ip_suffix: "bot".into(),
                date,
                time: noon,
                cik: 999_999,
                accession: acc,
                extension: "doc.txt".into(),
                size: 4096,
                is_index: false,
            });
        }
    }

    SynthLogs {
        entries,
        org_ips,
        patterns,
        assignments,
        fight_docs,
        expected_views,
    }
}
