from dataclasses import dataclass, field


@dataclass
class Config:
    name: str
    tags: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
