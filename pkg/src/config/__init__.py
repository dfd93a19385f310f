from .config_loader import TrainConfig, PRESETS, SCHEDULE_PRESETS, load_config, validate_config, parse_schedule

__all__ = ['TrainConfig', 'PRESETS', 'SCHEDULE_PRESETS', 'load_config', 'validate_config', 'parse_schedule']
