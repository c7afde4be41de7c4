//! Executes a subcommand on a parsed input document and assembles the
//! report. The certificate's per-pattern checks can fan out over threads;
//! results are aggregated in pattern order, so the output is byte-identical
//! regardless of the job count.

use std::fmt;

use toristack_core::fan::Fan;
use toristack_core::momentred::{
    check_regular_value, level_set_feasibility, moment_data_for, MomentData,
};
use toristack_core::morita::{admissible_evidence, assemble_certificate, check_splitting};
use toristack_core::stackbuild::{
    build_h, build_kerbar, chart_extension, isotropy, local_chart, StackyFan,
};
use toristack_core::Rat;

use crate::input::InputDocument;
use crate::report::{
    certificate_section, int_matrix_rows, pattern_dto, rat_matrix_rows, rat_vec, splitting_dto,
    ChartRow, ChartsSection, FanSection, GroupDesc, GroupsSection, IsotropyRowDto, IsotropySection,
    MomentSection, PresentationDto, Report, ValidationSection,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Fan,
    Groups,
    Charts,
    Isotropy,
    Moment,
    Certify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Validate => "validate",
            Self::Fan => "fan",
            Self::Groups => "groups",
            Self::Charts => "charts",
            Self::Isotropy => "isotropy",
            Self::Moment => "moment",
            Self::Certify => "certify",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub fan_complete_assert: bool,
    pub jobs: usize,
}

/// Errors that abort a run before any check can be reported; they name the
/// failed stage and map to the input-error exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunError {
    pub stage: &'static str,
    pub message: String,
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage failed: {}", self.stage, self.message)
    }
}

impl std::error::Error for RunError {}

pub fn run(command: Command, doc: &InputDocument, flags: &Flags) -> Result<Report, RunError> {
    match doc {
        InputDocument::Polytope(_) => run_on_polytope(command, doc, flags),
        InputDocument::StackyFan(_) => run_on_fan(command, doc, flags),
    }
}

fn run_on_polytope(
    command: Command,
    doc: &InputDocument,
    flags: &Flags,
) -> Result<Report, RunError> {
    let polytope = doc.to_polytope().expect("kind checked by caller");
    let mut report = Report::new(command.name(), doc);

    let validation = polytope.validate();
    report.validation = Some(ValidationSection::from_core(&validation));
    if command == Command::Validate {
        report.passed = validation.is_valid();
        return Ok(report);
    }
    if !validation.is_valid() {
        // downstream stages require a valid polytope; report the failed
        // checks instead of computing on bad data
        report.passed = false;
        return Ok(report);
    }

    let sf = polytope.normal_fan().map_err(|e| RunError {
        stage: "normal-fan",
        message: e.to_string(),
    })?;
    run_stages(command, report, &sf, Some(&polytope.etas()), flags)
}

fn run_on_fan(command: Command, doc: &InputDocument, flags: &Flags) -> Result<Report, RunError> {
    let (fan, labels) = doc.to_fan_parts().expect("kind checked by caller");
    let mut report = Report::new(command.name(), doc);

    let mut validation = fan.validate(flags.fan_complete_assert);
    // append the finite-cokernel requirement as a reported check
    let stacky = StackyFan::new(fan.clone(), labels.clone());
    validation.record(
        "finite-cokernel",
        stacky.is_ok(),
        match &stacky {
            Ok(_) => format!("ray map has full rank {}", fan.dim()),
            Err(e) => e.to_string(),
        },
    );
    report.validation = Some(ValidationSection::from_core(&validation));
    if command == Command::Validate {
        report.passed = validation.is_valid();
        return Ok(report);
    }
    if !validation.is_valid() {
        report.passed = false;
        return Ok(report);
    }
    let sf = stacky.map_err(|e| RunError {
        stage: "stacky-fan",
        message: e.to_string(),
    })?;

    if matches!(command, Command::Moment | Command::Certify) {
        return Err(RunError {
            stage: "input",
            message: format!(
                "`{}` needs facet constants, which a stacky fan does not carry; provide a polytope input",
                command.name()
            ),
        });
    }
    run_stages(command, report, &sf, None, flags)
}

fn run_stages(
    command: Command,
    mut report: Report,
    sf: &StackyFan,
    etas: Option<&[Rat]>,
    flags: &Flags,
) -> Result<Report, RunError> {
    let fan_error = |e: toristack_core::fan::FanError| RunError {
        stage: "pattern-enumeration",
        message: e.to_string(),
    };

    match command {
        Command::Validate => unreachable!("handled by the caller"),
        Command::Fan => {
            let section = fan_section(sf, etas.is_some(), flags);
            report.passed = section.valid;
            report.fan = Some(section);
        }
        Command::Groups => {
            let section = groups_section(sf);
            report.passed = section.algebraic.injective
                && section.compact.injective
                && section.same_data
                && section.splitting.exhausts;
            report.groups = Some(section);
        }
        Command::Charts => {
            let section = charts_section(sf)?;
            report.passed = section.all_multiplicative;
            report.charts = Some(section);
        }
        Command::Isotropy => {
            let section = isotropy_section(sf).map_err(fan_error)?;
            report.passed = section.all_matched;
            report.isotropy = Some(section);
        }
        Command::Moment => {
            let etas = etas.expect("checked by run_on_fan");
            let md = moment_data_for(sf, etas);
            let section = moment_section(sf.fan(), &md).map_err(fan_error)?;
            report.passed = section.regular && section.level_in_admissible_locus;
            report.moment = Some(section);
        }
        Command::Certify => {
            let etas = etas.expect("checked by run_on_fan");
            let md = moment_data_for(sf, etas);
            let cert = certify(sf, &md, flags.jobs.max(1)).map_err(fan_error)?;
            let section = certificate_section(&cert);
            report.passed = section.verdict;
            report.certificate = Some(section);
        }
    }
    Ok(report)
}

fn fan_section(sf: &StackyFan, from_polytope: bool, flags: &Flags) -> FanSection {
    // normal fans of bounded polytopes are complete by construction
    let assume = from_polytope || flags.fan_complete_assert;
    let validation = sf.fan().validate(assume);
    FanSection {
        dim: sf.dim(),
        rays: sf
            .fan()
            .rays()
            .iter()
            .map(|r| r.iter().cloned().map(crate::input::JsonInt).collect())
            .collect(),
        max_cones: sf
            .fan()
            .max_cones()
            .iter()
            .map(|c| c.iter().map(|&i| i + 1).collect())
            .collect(),
        labels: sf.labels().to_vec(),
        beta: int_matrix_rows(sf.beta()),
        completeness: format!("{:?}", sf.fan().completeness(assume)),
        valid: validation.is_valid(),
    }
}

fn groups_section(sf: &StackyFan) -> GroupsSection {
    let h = build_h(sf);
    let g = build_kerbar(sf);
    let same_data =
        h.free_rank == g.free_rank && h.torsion == g.torsion && h.exponents == g.exponents;
    GroupsSection {
        algebraic: PresentationDto::from_core(&h),
        compact: PresentationDto::from_core(&g),
        same_data,
        finite_extension: GroupDesc::from_core(&toristack_core::stackbuild::finite_extension(sf)),
        splitting: splitting_dto(&check_splitting(sf)),
    }
}

fn charts_section(sf: &StackyFan) -> Result<ChartsSection, RunError> {
    let mut rows = Vec::new();
    for cone in sf.fan().max_cones() {
        let chart = local_chart(sf, cone).map_err(|e| RunError {
            stage: "local-chart",
            message: e.to_string(),
        })?;
        let (label_part, total, unlabelled) = chart_extension(sf, cone).map_err(|e| RunError {
            stage: "chart-extension",
            message: e.to_string(),
        })?;
        let multiplicative = match (total.order(), label_part.order(), unlabelled.order()) {
            (Some(t), Some(l), Some(u)) => t == l * u,
            _ => false,
        };
        rows.push(ChartRow {
            cone: cone.iter().map(|&i| i + 1).collect(),
            order: crate::input::JsonInt(chart.order.clone()),
            chart_group: GroupDesc::from_core(&chart.chart_group),
            label_part: GroupDesc::from_core(&label_part),
            unlabelled_part: GroupDesc::from_core(&unlabelled),
            multiplicative,
        });
    }
    Ok(ChartsSection {
        all_multiplicative: rows.iter().all(|r| r.multiplicative),
        rows,
    })
}

fn isotropy_section(sf: &StackyFan) -> Result<IsotropySection, toristack_core::fan::FanError> {
    let h = build_h(sf);
    let g = build_kerbar(sf);
    let mut rows = Vec::new();
    for pattern in sf.fan().admissible_patterns()? {
        let symplectic = isotropy(&g, &pattern).group;
        let complex = isotropy(&h, &pattern).group;
        rows.push(IsotropyRowDto {
            pattern: pattern_dto(&pattern),
            admissible: true,
            matched: symplectic == complex,
            symplectic: GroupDesc::from_core(&symplectic),
            complex: GroupDesc::from_core(&complex),
        });
    }
    // excluded strata: stabilisers are still well-defined group theory, but
    // these points are removed from the quotient space, so they are flagged
    for pattern in sf.fan().minimal_inadmissible_patterns()? {
        let symplectic = isotropy(&g, &pattern).group;
        let complex = isotropy(&h, &pattern).group;
        rows.push(IsotropyRowDto {
            pattern: pattern_dto(&pattern),
            admissible: false,
            matched: symplectic == complex,
            symplectic: GroupDesc::from_core(&symplectic),
            complex: GroupDesc::from_core(&complex),
        });
    }
    Ok(IsotropySection {
        all_matched: rows.iter().all(|r| r.matched),
        rows,
    })
}

fn moment_section(
    fan: &Fan,
    md: &MomentData,
) -> Result<MomentSection, toristack_core::fan::FanError> {
    let (regular, irregular) = check_regular_value(md, fan);
    let (in_locus, violating) = toristack_core::momentred::level_set_in_cm(md, fan)?;
    Ok(MomentSection {
        iota_star: rat_matrix_rows(md.iota_star()),
        xi: rat_vec(md.xi()),
        regular,
        irregular_pattern: irregular.as_ref().map(pattern_dto),
        level_in_admissible_locus: in_locus,
        violating_pattern: violating.as_ref().map(pattern_dto),
        note: level_set_note(md),
    })
}

/// When the level system is a single positive equation, the level set is a
/// rational ellipsoid, hence diffeomorphic to a sphere.
fn level_set_note(md: &MomentData) -> Option<String> {
    use toristack_core::rat;
    if md.level_rank() != 1 {
        return None;
    }
    let row = md.iota_star().row(0);
    if row.iter().all(|c| c > &rat(0, 1)) && md.xi()[0] > rat(0, 1) {
        let m = md.num_coordinates();
        Some(format!(
            "level set is a rational ellipsoid, diffeomorphic to S^{}",
            2 * m - 1
        ))
    } else {
        None
    }
}

fn certify(
    sf: &StackyFan,
    md: &MomentData,
    jobs: usize,
) -> Result<toristack_core::morita::MoritaCertificate, toristack_core::fan::FanError> {
    let h = build_h(sf);
    let g = build_kerbar(sf);
    let admissible = sf.fan().admissible_patterns()?;
    let minimal = sf.fan().minimal_inadmissible_patterns()?;

    let evidence = parallel_map(jobs, &admissible, |p| admissible_evidence(md, &h, &g, p));
    let inadmissible_rows = parallel_map(jobs, &minimal, |p| level_set_feasibility(md, p));
    Ok(assemble_certificate(sf, &evidence, inadmissible_rows))
}

/// Order-preserving map over `items`, chunked across at most `jobs`
/// threads. Results are aggregated by input index, so the outcome does not
/// depend on the thread count.
fn parallel_map<T, U, F>(jobs: usize, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk_size = items.len().div_ceil(jobs);
    let chunks: Vec<&[T]> = items.chunks(chunk_size).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| scope.spawn(|| chunk.iter().map(&f).collect::<Vec<U>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker thread panicked"))
            .collect()
    })
}
