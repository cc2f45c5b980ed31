"""Configuration management for splitkit."""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Process-wide settings loaded from environment variables (prefix SPLITKIT_)."""

    # Logging
    debug: bool = False
    log_level: str = "INFO"

    # Parallelism
    threads: int = 4

    # Memory budget for balls and regions
    budget_mb: int = 512
    bytes_per_vertex: int = 256

    # Certification windows
    growth_window: int = 3
    stable_window: int = 2
    growth_threshold: int = 2
    ends_window: int = 3

    # Rewriting systems
    confluence_overlap_bound: int = 16
    completion_iteration_limit: int = 40

    # Trees and posets
    transversal_radius: int = 2
    max_tree_depth: int = 12
    translate_radius: int = 1
    conjugator_radius: int = 2

    # Collapsing graph-of-groups edges
    collapse_search_radius: int = 4
    collapse_table_limit: int = 64

    # Search slack for cyclic powers and double cosets
    power_search_slack: int = 4
    double_coset_slack: int = 2

    class Config:
        env_file = ".env"
        env_prefix = "SPLITKIT_"
        case_sensitive = False

    @property
    def max_vertices(self) -> int:
        """Vertex cap derived from the memory budget."""
        return max(1, self.budget_mb * 1024 * 1024 // self.bytes_per_vertex)


settings = Settings()
