from .parallel import blocks, run_jobs

__all__ = ['blocks', 'run_jobs']
