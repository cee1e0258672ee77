#
# Copyright 2025 SUSE LLC
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Run settings for soliton-discord, read from YAML over plugin defaults."""

import logging
import yaml

log = logging.getLogger('SolitonDiscord')


class Config(dict):
    """
    Run settings as a dict whose keys are also readable as attributes;
    nested mappings become nested Config instances.

        config = Config({'scenario': 'mixed', 'logging': {'level': 'INFO'}})
        config.scenario == config['scenario']
        config.logging.level
    """

    def __init__(self, data: dict):
        super().__init__(data)
        for key, val in data.items():
            if isinstance(val, (list, tuple, set)):
                setattr(self, key, [self.parse_value(item) for item in val])
            else:
                setattr(self, key, self.parse_value(val))

        log.debug("Config: %s", self)

    def parse_value(self, item):
        if isinstance(item, dict):
            return self.__class__(item)
        return item

    def merged(self, overrides: dict):
        """
        Return a new Config with the non-None overrides applied on top
        of the current settings.

        :param overrides: A mapping of setting names to new values.
        :return: A new Config instance.
        """
        data = dict(self)
        data.update(
            {key: val for key, val in overrides.items() if val is not None}
        )
        return self.__class__(data)

    def dump(self) -> str:
        """Serialize the settings as YAML with sorted keys."""
        return yaml.safe_dump(
            self._plain(self),
            default_flow_style=False,
            sort_keys=True
        )

    @classmethod
    def _plain(cls, item):
        if isinstance(item, dict):
            return {key: cls._plain(val) for key, val in item.items()}
        return item

    @staticmethod
    def load_defaults(data, hook):
        """
        Layer the given settings over the defaults collected from every
        registered plugin.

        :param data: Settings that take precedence, or None.
        :param hook: The plugin manager hook relay.
        :return: A plain dict of the merged settings.
        """
        defaults = {}
        hook.load_defaults(defaults=defaults)
        log.debug("Plugin defaults: %s", defaults)

        merged = {**defaults, **(data or {})}
        log.debug("Settings after defaults: %s", merged)
        return merged

    @classmethod
    def load_from_file(cls, filename, hook):
        """
        Read a YAML settings file and merge it over the plugin defaults.

        :param filename: Path to the YAML file.
        :param hook: The plugin manager hook relay.
        :raises ValueError: if the file does not hold a mapping.
        :return: A Config instance.
        """
        with open(filename, 'r', encoding='utf-8') as fh:
            yaml_data = yaml.safe_load(fh)

        if yaml_data is not None and not isinstance(yaml_data, dict):
            raise ValueError(
                f'{filename} must contain a mapping of settings, '
                f'not {type(yaml_data).__name__}'
            )

        log.debug("Loaded YAML %s as: %s", filename, yaml_data)
        return cls(cls.load_defaults(yaml_data, hook))
