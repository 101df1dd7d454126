from django.apps import AppConfig


class DelayLogisticConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'delay_logistic'
    verbose_name = 'Delay logistic lab'
