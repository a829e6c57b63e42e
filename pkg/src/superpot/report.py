from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of a named verification: pass flag plus human-readable details."""

    name: str
    ok: bool
    violations: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def line(self):
        return f"{self.name}: {'pass' if self.ok else 'FAIL'}"

    def text(self):
        lines = [self.line()]
        lines += [f"  - {v}" for v in self.violations]
        return "\n".join(lines)

    def __bool__(self):
        return self.ok
