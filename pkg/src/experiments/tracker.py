"""
ExperimentTracker records what a CLI run did and writes it as ``run_summary.md``.

Timestamps live only in the summary; the CSV outputs carry none.
"""

from typing import Any, Dict, List, Optional
from datetime import datetime
import time


class ExperimentTracker:
    """Tracks the stages, results and decisions of one experiment run."""

    def __init__(self):
        """Initialize the tracker."""
        self.current_experiment: Optional[str] = None
        self.metadata: Dict[str, Any] = {}
        self.stages: List[Dict[str, Any]] = []
        self.results: List[Dict[str, Any]] = []
        self.decisions: List[Dict[str, Any]] = []
        self.errors: List[Dict[str, Any]] = []
        self.outputs: List[str] = []
        self.start_time: Optional[datetime] = None
        self.end_time: Optional[datetime] = None
        self._stage_started: Optional[float] = None

    def start_experiment(self, name: str, metadata: Optional[Dict[str, Any]] = None) -> None:
        """Start tracking a new experiment."""
        self.current_experiment = name
        self.metadata = dict(metadata or {})
        self.stages, self.results, self.decisions, self.errors, self.outputs = [], [], [], [], []
        self.start_time = datetime.now()
        self.end_time = None

    def end_experiment(self, summary: str) -> None:
        self.end_time = datetime.now()
        self.metadata["summary"] = summary

    def begin_stage(self, title: str) -> None:
        self._stage_started = time.perf_counter()
        self.stages.append({"title": title, "seconds": None, "details": ""})

    def end_stage(self, details: str = "") -> None:
        if not self.stages or self._stage_started is None:
            raise ValueError("No stage is currently open")
        stage = self.stages[-1]
        stage["seconds"] = time.perf_counter() - self._stage_started
        stage["details"] = details
        self._stage_started = None

    def log_result(self, name: str, value: Any) -> None:
        self.results.append({"name": name, "value": value})

    def log_decision(self, decision: str, reason: str) -> None:
        """Log a decision and its reasoning."""
        self.decisions.append({"decision": decision, "reason": reason})

    def log_error(self, error: str) -> None:
        self.errors.append({"timestamp": datetime.now(), "error": error})

    def log_output(self, path: str) -> None:
        self.outputs.append(str(path))

    def format_summary(self, format_type: str = "markdown") -> str:
        """Format the run summary in the specified format."""
        if format_type != "markdown":
            raise ValueError(f"Unsupported format type: {format_type}")

        summary = f"# Run Summary: {self.current_experiment}\n\n"

        summary += "## Run Details\n"
        for key, value in self.metadata.items():
            summary += f"- **{key}**: {value}\n"
        summary += f"- **Started**: {self.start_time}\n"
        if self.end_time:
            summary += f"- **Completed**: {self.end_time}\n"
        summary += "\n"

        if self.stages:
            summary += "## Stages\n"
            for stage in self.stages:
                seconds = "open" if stage["seconds"] is None else f"{stage['seconds']:.2f} s"
                summary += f"### {stage['title']} ({seconds})\n"
                if stage["details"]:
                    summary += f"{stage['details']}\n"
                summary += "\n"

        if self.results:
            summary += "## Results\n"
            for result in self.results:
                summary += f"- **{result['name']}**: {result['value']}\n"
            summary += "\n"

        if self.decisions:
            summary += "## Key Decisions\n"
            for decision in self.decisions:
                summary += f"### {decision['decision']}\n"
                summary += f"**Reason**: {decision['reason']}\n\n"

        if self.outputs:
            summary += "## Outputs\n"
            for path in self.outputs:
                summary += f"- `{path}`\n"
            summary += "\n"

        if self.errors:
            summary += "## Errors Encountered\n"
            for error in self.errors:
                summary += f"- {error['timestamp']}: {error['error']}\n"
            summary += "\n"

        return summary

    def save_summary(self, file_path: str) -> None:
        """Save the run summary to a markdown file."""
        if not self.current_experiment:
            raise ValueError("No experiment is currently being tracked")
        with open(file_path, 'w', encoding='utf-8') as f:
            f.write(self.format_summary())
