from typing import Dict, Any, List, Optional
from dataclasses import dataclass, asdict
from datetime import datetime
import csv
import json
import logging
import os
import traceback

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    'Timestamp',
    'Error Type',
    'Error Message',
    'Component',
    'Severity',
    'Context',
    'Stack Trace'
]


@dataclass
class ExperimentError:
    """A failure recorded while running an experiment."""
    timestamp: str
    error_type: str
    error_message: str
    context: Dict[str, Any]
    stack_trace: str
    component: str
    severity: str


class ErrorTracker:
    """Persists experiment failures as CSV, JSON and markdown reports."""

    def __init__(self, log_dir: Optional[str] = None):
        """Initialize the error tracker under ``log_dir`` (default: ./errors)."""
        self.log_dir = log_dir or os.path.join(os.getcwd(), 'errors')
        self.errors: List[ExperimentError] = []
        self._ensure_log_directory()
        self._load_history()

    @property
    def csv_path(self) -> str:
        return os.path.join(self.log_dir, 'error_log.csv')

    @property
    def json_path(self) -> str:
        return os.path.join(self.log_dir, 'error_log.json')

    def _ensure_log_directory(self) -> None:
        os.makedirs(self.log_dir, exist_ok=True)
        if not os.path.exists(self.csv_path):
            with open(self.csv_path, 'w', newline='', encoding='utf-8') as f:
                csv.writer(f).writerow(CSV_COLUMNS)

    def _load_history(self) -> None:
        """Pick up failures recorded by earlier runs in the same directory."""
        if not os.path.exists(self.json_path):
            return
        try:
            with open(self.json_path, encoding='utf-8') as f:
                self.errors = [ExperimentError(**entry) for entry in json.load(f)]
        except (json.JSONDecodeError, TypeError) as exc:
            logger.warning(f"Ignoring unreadable error history {self.json_path}: {exc}")

    def log_error(self, error_type: str, error_message: str, context: Dict[str, Any],
                  stack_trace: Optional[str] = None, component: str = "unknown",
                  severity: str = "ERROR") -> ExperimentError:
        """Record one failure and return the stored entry."""
        error = ExperimentError(
            timestamp=datetime.now().isoformat(),
            error_type=error_type,
            error_message=error_message,
            context=context,
            stack_trace=stack_trace or traceback.format_exc(),
            component=component,
            severity=severity,
        )
        self.errors.append(error)
        self._save_to_json()
        self._append_to_csv(error)
        if severity in ('CRITICAL', 'ERROR'):
            report = self._generate_error_report(error)
            logger.info(f"Error report written to {report}")
        return error

    def log_exception(self, exc: BaseException, context: Dict[str, Any],
                      component: str, severity: str = "ERROR") -> ExperimentError:
        """Record an exception using its class name as the error type."""
        trace = ''.join(traceback.format_exception(type(exc), exc, exc.__traceback__))
        return self.log_error(type(exc).__name__, str(exc), context,
                              stack_trace=trace, component=component, severity=severity)

    def _save_to_json(self) -> None:
        with open(self.json_path, 'w', encoding='utf-8') as f:
            json.dump([asdict(e) for e in self.errors], f, indent=2, default=str)

    def _append_to_csv(self, error: ExperimentError) -> None:
        with open(self.csv_path, 'a', newline='', encoding='utf-8') as f:
            csv.writer(f).writerow([
                error.timestamp,
                error.error_type,
                error.error_message,
                error.component,
                error.severity,
                json.dumps(error.context, default=str),
                error.stack_trace
            ])

    def _generate_error_report(self, error: ExperimentError) -> str:
        report_dir = os.path.join(self.log_dir, 'reports')
        os.makedirs(report_dir, exist_ok=True)

        stamp = datetime.fromisoformat(error.timestamp).strftime('%Y%m%d_%H%M%S_%f')
        report_path = os.path.join(report_dir, f"error_report_{stamp}.md")

        with open(report_path, 'w', encoding='utf-8') as f:
            f.write("# Experiment Error Report\n\n")
            f.write("## Error Details\n")
            f.write(f"- **Timestamp:** {error.timestamp}\n")
            f.write(f"- **Type:** {error.error_type}\n")
            f.write(f"- **Component:** {error.component}\n")
            f.write(f"- **Severity:** {error.severity}\n\n")

            f.write("## Error Message\n")
            f.write(f"```\n{error.error_message}\n```\n\n")

            f.write("## Context\n")
            f.write(f"```json\n{json.dumps(error.context, indent=2, default=str)}\n```\n\n")

            if error.stack_trace:
                f.write("## Stack Trace\n")
                f.write(f"```python\n{error.stack_trace}\n```\n")
        return report_path

    def get_errors(self, severity: Optional[str] = None,
                   component: Optional[str] = None) -> List[ExperimentError]:
        """Get errors filtered by severity and/or component."""
        filtered = self.errors
        if severity:
            filtered = [e for e in filtered if e.severity == severity]
        if component:
            filtered = [e for e in filtered if e.component == component]
        return filtered

    def get_error_summary(self) -> Dict[str, Any]:
        """Count errors by type, severity and component."""
        summary: Dict[str, Any] = {
            'by_type': {},
            'by_severity': {},
            'by_component': {},
            'total': len(self.errors)
        }
        for error in self.errors:
            for key, value in (('by_type', error.error_type),
                               ('by_severity', error.severity),
                               ('by_component', error.component)):
                summary[key][value] = summary[key].get(value, 0) + 1
        return summary
