from django.apps import AppConfig


class DmtConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "dmt"
    verbose_name = "ICR diversity-multiplexing tradeoff"
