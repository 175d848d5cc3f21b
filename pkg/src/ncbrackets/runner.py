"""Command orchestration shared by the HTTP service and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

from . import diffalg
from .dcd import DCDStructure, check_appendix_identities, check_cd_axioms
from .double_bracket import DoubleBracketTable, check_double_poisson
from .dpva import LambdaBracketTable, check_dpva
from .equivalence import cd_to_dpva, dpva_to_cd, roundtrip_check, roundtrip_check_rev
from .errors import EngineError, PresentationError
from .presentation import Options, Presentation, parse_presentation, print_presentation
from .rep_kr import induced_cd, induced_lambda, induced_poisson
from .reports import Report

COMMANDS = ("check", "convert", "roundtrip", "rep", "appendix")

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2


@dataclass
class RunResult:
    exit_code: int
    report: Report | None = None
    presentation_out: str | None = None
    induced: dict | None = None
    error: str | None = None

    def text(self) -> str:
        if self.error is not None:
            return f"error: {self.error}\n"
        parts = []
        if self.report is not None:
            parts.append(self.report.to_text())
        if self.presentation_out is not None:
            parts.append(self.presentation_out)
        if self.induced is not None:
            lines = [f"induced structure (N={self.induced['N']}):"]
            for section, entries in self.induced.items():
                if section == "N":
                    continue
                lines.append(f"  [{section}]")
                for key, value in entries.items():
                    lines.append(f"  {key} = {value}")
            parts.append("\n".join(lines) + "\n")
        return "\n".join(parts)

    def json_obj(self) -> dict:
        out: dict = {"exit_code": self.exit_code}
        if self.error is not None:
            out["error"] = self.error
        if self.report is not None:
            out["report"] = self.report.to_json_obj()
        if self.presentation_out is not None:
            out["presentation"] = self.presentation_out
        if self.induced is not None:
            out["induced"] = self.induced
        return out


def run_command(command: str, presentation_text: str, **overrides) -> RunResult:
    """Parse a presentation and run one command against it."""
    if command not in COMMANDS:
        return RunResult(EXIT_USAGE, error=f"unknown command {command!r}")
    try:
        presentation = parse_presentation(presentation_text)
        options = presentation.options.merged(**overrides)
        diffalg.set_lambda_cap(options.lambda_cap)
        structure = presentation.structure()
        return _dispatch(command, structure, options)
    except PresentationError as exc:
        return RunResult(EXIT_USAGE, error=str(exc))
    except EngineError as exc:
        return RunResult(EXIT_USAGE, error=str(exc))


def _dispatch(command: str, structure, options: Options) -> RunResult:
    kind = options.kind
    if command == "check":
        if isinstance(structure, DoubleBracketTable):
            report = check_double_poisson(
                structure, options.convention, seed=options.seed, samples=options.samples
            )
        elif isinstance(structure, LambdaBracketTable):
            report = check_dpva(structure, seed=options.seed, samples=options.samples)
        else:
            report = check_cd_axioms(structure, seed=options.seed, samples=options.samples)
        return RunResult(EXIT_OK if report.ok else EXIT_VIOLATIONS, report=report)

    if command == "convert":
        if isinstance(structure, DCDStructure):
            table = cd_to_dpva(structure)
            out_options = Options(
                kind="dpva",
                seed=options.seed,
                samples=options.samples,
                n=options.n,
                graded=True,
                lambda_cap=options.lambda_cap,
            )
            return RunResult(EXIT_OK, presentation_out=print_presentation(table, out_options))
        if isinstance(structure, LambdaBracketTable):
            S = dpva_to_cd(structure)
            out_options = Options(
                kind="dcd",
                seed=options.seed,
                samples=options.samples,
                n=options.n,
                lambda_cap=options.lambda_cap,
            )
            return RunResult(EXIT_OK, presentation_out=print_presentation(S, out_options))
        return RunResult(EXIT_USAGE, error="convert applies to dcd or dpva presentations")

    if command == "roundtrip":
        if isinstance(structure, DCDStructure):
            report = roundtrip_check(structure, seed=options.seed, samples=options.samples)
        elif isinstance(structure, LambdaBracketTable):
            report = roundtrip_check_rev(structure, seed=options.seed, samples=options.samples)
        else:
            return RunResult(EXIT_USAGE, error="roundtrip applies to dcd or dpva presentations")
        return RunResult(EXIT_OK if report.ok else EXIT_VIOLATIONS, report=report)

    if command == "rep":
        induced: dict = {"N": options.n}
        if isinstance(structure, DoubleBracketTable):
            bracket, report = induced_poisson(
                structure, options.n, seed=options.seed, samples=options.samples
            )
            syms = bracket.symbols()
            table = {}
            for s1 in syms:
                for s2 in syms:
                    value = bracket.bracket_syms(s1, s2)
                    if not value.is_zero:
                        table[f"{{{s1},{s2}}}"] = str(value)
            induced["poisson"] = table
        elif isinstance(structure, LambdaBracketTable):
            bracket, report = induced_lambda(
                structure, options.n, seed=options.seed, samples=options.samples
            )
            syms = bracket.symbols()
            table = {}
            for s1 in syms:
                for s2 in syms:
                    value = bracket.eval(
                        _sym_poly(s1), _sym_poly(s2)
                    )
                    if not value.is_zero:
                        table[f"{{{s1} lam {s2}}}"] = str(value)
            induced["lambda"] = table
        else:
            comm, report = induced_cd(
                structure, options.n, seed=options.seed, samples=options.samples
            )
            partial = {}
            for s in comm.a_symbols():
                value = comm.partial(_sym_poly(s))
                if not value.is_zero:
                    partial[str(s)] = str(value)
            pairing = {}
            bracket_table = {}
            for s1 in comm.e_symbols():
                for s2 in comm.e_symbols():
                    p = comm.pairing_syms(s1, s2)
                    if not p.is_zero:
                        pairing[f"<{s1},{s2}>"] = str(p)
                    b = comm.bracket_syms(s1, s2)
                    if not b.is_zero:
                        bracket_table[f"[{s1},{s2}]"] = str(b)
            induced["partial"] = partial
            induced["pairing"] = pairing
            induced["bracket"] = bracket_table
        return RunResult(
            EXIT_OK if report.ok else EXIT_VIOLATIONS, report=report, induced=induced
        )

    if command == "appendix":
        if not isinstance(structure, DCDStructure):
            return RunResult(EXIT_USAGE, error="appendix applies to dcd presentations")
        report = check_appendix_identities(structure, seed=options.seed, samples=options.samples)
        return RunResult(EXIT_OK if report.ok else EXIT_VIOLATIONS, report=report)

    return RunResult(EXIT_USAGE, error=f"unknown command {command!r}")


def _sym_poly(s):
    from .rep_kr import CPoly

    return CPoly.sym(s)
